#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "plab/cli.hpp"
#include "plab/scenario_io.hpp"

using namespace plab;
namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"plab"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("builtin scenarios and config round trip") {
    for (const auto& name : builtin_scenario_names()) {
        const Scenario s = builtin_scenario(name);
        const Scenario back = scenario_from_config(scenario_to_config(s));
        CHECK(back.name == s.name);
        CHECK(back.field.p == s.field.p);
        CHECK(back.field.dim == s.field.dim);
        CHECK(back.theta.has_value() == s.theta.has_value());
        if (s.theta) CHECK(*back.theta == *s.theta);
        CHECK(back.source.kind == s.source.kind);
        CHECK(back.source.amplitude == s.source.amplitude);
        CHECK(back.source.exponent == s.source.exponent);
        CHECK(back.boundary.kind == s.boundary.kind);
        CHECK(back.resolution == s.resolution);
        CHECK(back.solver.epsilon_schedule == s.solver.epsilon_schedule);
        CHECK(back.measure_alpha0 == s.measure_alpha0);
    }
    CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
    // theta outside (1, p) is rejected at parse time
    Scenario bad = builtin_scenario("sharp-theta");
    bad.theta = 2.5;  // >= p = 1.8
    CHECK_THROWS_AS(scenario_from_config(scenario_to_config(bad)), std::invalid_argument);
}

TEST_CASE("cli: usage errors carry the usage exit code") {
    CHECK(run_cli({"definitely-not-a-command"}) == cli::kExitUsage);
    CHECK(run_cli({"norms", "--input", "/nonexistent/grid.csv", "--q", "2"}) == cli::kExitIo);
}

TEST_CASE("cli: norms command emits one row per request") {
    TempDir tmp("plab_cli_norms");
    const auto f = tabulate_radial_power(2, 65, 1.0, -1.8);
    const auto grid_path = (tmp.path / "f.csv").string();
    write_grid_csv(f, grid_path);
    const auto out_path = (tmp.path / "norms.csv").string();
    CHECK(run_cli({"norms", "--input", grid_path.c_str(), "--weak-q", "1.1111", "--q", "2.0",
                   "--bmo", "--out", out_path.c_str()}) == cli::kExitOk);
    const auto text = slurp(out_path);
    CHECK(text.find("quantity,parameters,value,resolution,cap") == 0);
    CHECK(text.find("weak_lq") != std::string::npos);
    CHECK(text.find("lq,q=2") != std::string::npos);
    CHECK(text.find("bmo") != std::string::npos);
}

TEST_CASE("cli: scenario writes a report directory and a config echo") {
    TempDir tmp("plab_cli_scenario");
    // trimmed-down scenario file to keep the run quick
    Scenario s = builtin_scenario("sharp-theta");
    s.resolution = 65;
    s.solver.max_iters = 4000;
    const auto cfg_path = (tmp.path / "quick.cfg").string();
    {
        std::ofstream out(cfg_path);
        out << scenario_to_config(s);
    }
    const auto out_root = (tmp.path / "out").string();
    CHECK(run_cli({"scenario", "--file", cfg_path.c_str(), "--out", out_root.c_str()}) ==
          cli::kExitOk);
    const fs::path dir = fs::path(out_root) / "sharp-theta";
    for (const char* name : {"summary.txt", "norms.csv", "solution_fine.csv", "scenario.cfg",
                             "decay_00.csv", "solve_fine.txt"})
        CHECK(fs::exists(dir / name));
    const auto summary = slurp(dir / "summary.txt");
    CHECK(summary.find("verdict=") != std::string::npos);
    CHECK(summary.find("fitted_alpha=") != std::string::npos);
}

TEST_CASE("cli: sweep emits a deterministic index for a fixed seed") {
    TempDir tmp("plab_cli_sweep");
    const auto out1 = (tmp.path / "a").string();
    const auto out2 = (tmp.path / "b").string();
    auto sweep = [&](const std::string& out) {
        return run_cli({"sweep", "--p", "1.8", "--theta", "1.5", "--res", "65", "--seed", "7",
                        "--workers", "2", "--out", out.c_str()});
    };
    CHECK(sweep(out1) == cli::kExitOk);
    CHECK(sweep(out2) == cli::kExitOk);
    CHECK(slurp(fs::path(out1) / "sweep_index.csv") == slurp(fs::path(out2) / "sweep_index.csv"));
    // grid exports are byte-identical too (timestamps live only in summary.txt)
    CHECK(slurp(fs::path(out1) / "p1.8_theta1.5" / "solution_fine.csv") ==
          slurp(fs::path(out2) / "p1.8_theta1.5" / "solution_fine.csv"));
    CHECK(slurp(fs::path(out1) / "sweep_index.csv").find("p,theta,predicted_alpha,fitted_alpha") ==
          0);
    // the sweep rejects empty grids
    CHECK(run_cli({"sweep", "--p", "1.2", "--theta", "1.9", "--out", out1.c_str()}) ==
          cli::kExitUsage);
}

TEST_CASE("cli: solve exports the grid pair") {
    TempDir tmp("plab_cli_solve");
    const auto out_root = tmp.path.string();
    CHECK(run_cli({"solve", "--builtin", "sharp-theta", "--res", "65", "--out",
                   out_root.c_str()}) == cli::kExitOk);
    const fs::path dir = fs::path(out_root) / "sharp-theta_solve";
    CHECK(fs::exists(dir / "solution.csv"));
    CHECK(fs::exists(dir / "source.csv"));
    CHECK(fs::exists(dir / "solve.txt"));
    const auto g = read_grid_csv((dir / "solution.csv").string());
    CHECK(g.m == 65);
}
