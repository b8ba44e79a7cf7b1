#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plab/radial.hpp"

using namespace plab;

namespace {

// independent oracle: Δ_p(r^beta) at r0 by central differences of the flux
// r^{1-n} d/dr ( r^{n-1} |u'|^{p-2} u' )
double fd_p_laplacian_power(double p, int n, double beta, double r0) {
    auto flux = [&](double r) {
        const double up = beta * std::pow(r, beta - 1.0);
        return std::pow(r, n - 1) * std::pow(std::abs(up), p - 2.0) * up;
    };
    const double h = 1e-6 * r0;
    return std::pow(r0, 1.0 - n) * (flux(r0 + h) - flux(r0 - h)) / (2.0 * h);
}

double fd_p_laplacian_log(double p, int n, double c, double r0) {
    auto flux = [&](double r) {
        const double up = c / r;
        return std::pow(r, n - 1) * std::pow(std::abs(up), p - 2.0) * up;
    };
    const double h = 1e-6 * r0;
    return std::pow(r0, 1.0 - n) * (flux(r0 + h) - flux(r0 - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("p-laplacian of powers: frozen cases") {
    {
        const auto [c, e] = p_laplacian_of_power(2.0, 3, 2.0);  // Δ|X|^2 = 2n
        CHECK(c == doctest::Approx(6.0));
        CHECK(e == doctest::Approx(0.0));
    }
    {
        const auto [c, e] = p_laplacian_of_power(3.0, 4, 1.0);
        CHECK(c == doctest::Approx(3.0));  // n-1
        CHECK(e == doctest::Approx(-1.0));
    }
    {
        // theta example: exponent collapses to -p/theta
        const double p = 2.5, theta = 2.0;
        const double beta = p / (p - 1.0) * (theta - 1.0) / theta;
        const auto [c, e] = p_laplacian_of_power(p, 4, beta);
        CHECK(e == doctest::Approx(-p / theta));
        CHECK(c == doctest::Approx(2.0919958793600095));
    }
}

TEST_CASE("p-laplacian of powers against the finite-difference oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double p = 1.2 + 2.3 * unif(rng);
        const int n = 2 + static_cast<int>(3 * unif(rng));
        double beta = -1.5 + 3.5 * unif(rng);
        if (std::abs(beta) < 0.05) beta = 0.4;
        const double r0 = 0.2 + 0.6 * unif(rng);
        const auto [c, e] = p_laplacian_of_power(p, n, beta);
        const double expected = c * std::pow(r0, e);
        CHECK(fd_p_laplacian_power(p, n, beta, r0) ==
              doctest::Approx(expected).epsilon(1e-5));
    }
    CHECK_THROWS_AS(p_laplacian_of_power(2.0, 3, 0.0), std::invalid_argument);
}

TEST_CASE("p-laplacian of logs") {
    {
        const auto [c, e] = p_laplacian_of_log(2.0, 3, 1.0);
        CHECK(c == doctest::Approx(1.0));
        CHECK(e == doctest::Approx(-2.0));
    }
    {
        const auto [c, e] = p_laplacian_of_log(2.0, 4, 1.0);
        CHECK(c == doctest::Approx(2.0));
        CHECK(e == doctest::Approx(-2.0));
    }
    for (auto [p, n, c] : {std::tuple{2.5, 4, 0.7}, {1.5, 3, 1.3}, {3.0, 5, 2.0}}) {
        const auto [coeff, e] = p_laplacian_of_log(p, n, c);
        const double r0 = 0.43;
        CHECK(fd_p_laplacian_log(p, n, c, r0) ==
              doctest::Approx(coeff * std::pow(r0, e)).epsilon(1e-5));
        CHECK(e == -p);
    }
    CHECK_THROWS_AS(p_laplacian_of_log(2.0, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p_laplacian_of_log(2.0, 3, -1.0), std::invalid_argument);
}

TEST_CASE("log solution constant") {
    CHECK(log_solution_constant(2.5, 4) == doctest::Approx(0.7631428283688879));
    CHECK(log_solution_constant(2.0, 3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(log_solution_constant(3.0, 3), std::invalid_argument);
}

TEST_CASE("radial solve: zero source is constant") {
    const auto res = solve_radial_dirichlet(RadialProfile::power(0.0, 1.0), 2.3, 3, 5.0, 2048);
    for (double v : res.u) CHECK(v == doctest::Approx(5.0));
    CHECK(res.u.back() == 5.0);
    for (double fl : res.flux) CHECK(fl == doctest::Approx(0.0));
}

TEST_CASE("radial solve: borderline log source") {
    // -Δ_p u = (n-p) r^{-p} with u(1)=0 is solved by u = ln(1/r)
    const double p = 2.5;
    const int n = 4;
    const auto res = solve_radial_dirichlet(RadialProfile::power(n - p, -p), p, n, 0.0, 20000);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.r.size(); ++i)
        worst = std::max(worst, std::abs(res.u[i] - std::log(1.0 / res.r[i])));
    CHECK(worst < 1e-7 * std::log(1.0 / res.r.front()));

    // the normalization constant: source r^{-p} produces c_{n,p} ln(1/r)
    const auto unit = solve_radial_dirichlet(RadialProfile::power(1.0, -p), p, n, 0.0, 20000);
    const double c_np = log_solution_constant(p, n);
    CHECK(unit.value_at(0.01) == doctest::Approx(c_np * std::log(100.0)).epsilon(1e-6));
}

TEST_CASE("radial solve: power round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int done = 0;
    while (done < 8) {
        const double p = 1.4 + 1.8 * unif(rng);
        const int n = 2 + static_cast<int>(3 * unif(rng));
        const double beta = 0.3 + 1.4 * unif(rng);
        const auto [c, e] = p_laplacian_of_power(p, n, beta);
        if (e <= -n + 0.1) continue;  // source must stay integrable against s^{n-1}
        // -Δ_p(r^beta) = -c r^e
        const auto res =
            solve_radial_dirichlet(RadialProfile::power(-c, e), p, n, 1.0, 16384);
        double worst = 0.0;
        for (std::size_t i = 0; i < res.r.size(); ++i)
            worst = std::max(worst, std::abs(res.u[i] - std::pow(res.r[i], beta)));
        CHECK(worst < 2e-7);
        ++done;
    }
}

TEST_CASE("radial solve: error at least halves when nodes double") {
    const double p = 1.8, theta = 1.5;
    const double beta = p / (p - 1.0) * (theta - 1.0) / theta;
    const auto [c, e] = p_laplacian_of_power(p, 3, beta);
    const RadialProfile f = RadialProfile::power(-c, e);
    double prev = -1.0;
    for (int nodes : {1000, 2000, 4000, 8000}) {
        const auto res = solve_radial_dirichlet(f, p, 3, 1.0, nodes);
        double err = 0.0;
        for (std::size_t i = 0; i < res.r.size(); ++i)
            err = std::max(err, std::abs(res.u[i] - std::pow(res.r[i], beta)));
        if (prev > 0.0) CHECK(err < 0.55 * prev);
        prev = err;
    }
}

TEST_CASE("radial solve: flux identity against an independent quadrature") {
    const double p = 2.2;
    const int n = 3;
    const RadialProfile f = RadialProfile::power(2.0, -1.3);
    const auto res = solve_radial_dirichlet(f, p, n, 0.0, 4096);
    // Simpson on a fine uniform-in-log grid, done apart from the solver's path
    auto source_integral = [&](double r) {
        const int steps = 4000;  // even
        const double la = std::log(1e-9), lb = std::log(r);
        const double dh = (lb - la) / steps;
        auto g = [&](double t) {
            const double s = std::exp(t);
            return std::pow(s, static_cast<double>(n)) * f(s);  // s^{n-1} f ds = s^n f dt
        };
        double acc = g(la) + g(lb);
        for (int i = 1; i < steps; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(la + i * dh);
        return acc * dh / 3.0;
    };
    for (double r : {0.01, 0.1, 0.4, 0.9}) {
        const double lhs = std::pow(r, n - 1.0) * res.flux_at(r);
        CHECK(lhs == doctest::Approx(-source_integral(r)).epsilon(1e-5));
    }
}

TEST_CASE("radial solve: nonnegative sources give nonincreasing solutions") {
    const auto res = solve_radial_dirichlet(RadialProfile::power(1.0, -0.7), 1.7, 3, 2.0, 2048);
    for (std::size_t i = 1; i < res.u.size(); ++i) CHECK(res.u[i] <= res.u[i - 1] + 1e-14);
    CHECK(res.u.back() == 2.0);
}

TEST_CASE("radial solve: input guards") {
    CHECK_THROWS_AS(solve_radial_dirichlet(RadialProfile::power(1.0, -3.0), 2.0, 3, 0.0, 1024),
                    std::invalid_argument);  // not integrable against s^{n-1}
    CHECK_THROWS_AS(solve_radial_dirichlet(RadialProfile::power(1.0, -0.5), 2.0, 3, 0.0, 8),
                    std::invalid_argument);  // too few nodes
    // capped sources integrate regardless of the exponent
    CHECK_NOTHROW(solve_radial_dirichlet(RadialProfile::power(1.0, -5.0, 0.01), 2.0, 3, 0.0, 64));
}

TEST_CASE("tabulated profiles validate and interpolate") {
    CHECK_THROWS_AS(RadialProfile::tabulated({0.1, 0.1, 0.5}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
    const auto f = RadialProfile::tabulated({0.1, 0.5, 1.0}, {1.0, 2.0, 4.0});
    CHECK(f(0.3) == doctest::Approx(1.5));
    CHECK(f(0.75) == doctest::Approx(3.0));
    CHECK(f(0.05) == doctest::Approx(1.0));  // clamped
}
