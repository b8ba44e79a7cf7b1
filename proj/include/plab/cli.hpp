#pragma once

namespace plab::cli {

// Exit codes: 0 success, 2 usage/config error, 3 solver non-convergence
// (partial reports are still written), 4 I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitIo = 4;

int run(int argc, const char* const* argv);

}  // namespace plab::cli
