// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in the checks themselves.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "plab/analysis.hpp"
#include "plab/norms.hpp"
#include "plab/radial.hpp"
#include "plab/scenario_io.hpp"
#include "plab/solver.hpp"

using namespace plab;

namespace {

int failures = 0;

void report(int id, bool ok, const char* what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// 1. Radial oracle exactness: solve_radial_dirichlet reproduces r^beta from
//    its closed-form source to 1e-6 sup-relative error at 1e5 nodes, < 1s each.
void criterion_1() {
    bool ok = true;
    std::string detail;
    for (double p : {1.5, 2.5}) {
        for (int n : {3, 4}) {
            for (double theta : {1.25, 2.0}) {
                const double beta = p / (p - 1.0) * (theta - 1.0) / theta;
                const auto [c, e] = p_laplacian_of_power(p, n, beta);
                const auto t0 = std::chrono::steady_clock::now();
                const auto res =
                    solve_radial_dirichlet(RadialProfile::power(-c, e), p, n, 1.0, 100000);
                const double seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                double sup_err = 0.0, sup = 0.0;
                for (std::size_t i = 0; i < res.r.size(); ++i) {
                    const double exact = std::pow(res.r[i], beta);
                    sup_err = std::max(sup_err, std::abs(res.u[i] - exact));
                    sup = std::max(sup, std::abs(exact));
                }
                const double rel = sup_err / sup;
                if (rel > 1e-6 || seconds >= 1.0) {
                    ok = false;
                    detail += fmt("p=%g n=%d theta=%g rel=%.3g t=%.2fs; ", p, n, theta, rel,
                                  seconds);
                }
            }
        }
    }
    if (ok) detail = "8 cases, sup-relative error <= 1e-6, each < 1 s";
    report(1, ok, "radial oracle exactness", detail);
}

// 2. Sharp exponent: 2-d, p=1.8, theta=1.5, w=1, 257^2 grid, extremal source;
//    the fitted exponent at the origin is within 0.05 of 0.75.
void criterion_2() {
    const double p = 1.8, theta = 1.5;
    const double predicted = p / (p - 1.0) * (theta - 1.0) / theta;
    const double beta = predicted;
    const auto [c, e] = p_laplacian_of_power(p, 2, beta);
    const auto field = make_field(p, 2, CoefficientField::constant(1.0));
    const auto f = tabulate_radial_power(2, 257, -c, e);
    auto boundary = [beta](const Point& X) { return std::pow(norm2(X), beta); };
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = solve(f, field, boundary, {});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto decay = dyadic_decay(rep.solution, {0.0, 0.0, 0.0}, 0.5, p, 6);
    const double err = std::abs(decay.fitted_alpha - predicted);
    report(2, err <= 0.05 && rep.converged, "sharp Holder exponent at the origin",
           fmt("fitted=%.4f predicted=%.4f |diff|=%.4f converged=%d solve=%.0fs",
               decay.fitted_alpha, predicted, err, rep.converged ? 1 : 0, seconds));
}

// 3. BMO borderline: capped |X|^{-p} source, p=1.8; the BMO seminorm moves
//    <= 10% between 129^2 and 257^2 while max|u| grows >= 20%.
void criterion_3() {
    Scenario s = builtin_scenario("bmo-log");
    s.resolution = 129;
    const auto rep = run_scenario(s);
    const bool ok = rep.verdict.bmo_stable && rep.verdict.sup_growing &&
                    rep.verdict.solver_converged;
    report(3, ok, "BMO-stable, sup-growing borderline",
           fmt("bmo %.4f -> %.4f (change %.1f%%), sup %.3f -> %.3f (growth %.1f%%)",
               rep.bmo_coarse, rep.bmo_fine, 100.0 * rep.verdict.bmo_change, rep.sup_coarse,
               rep.sup_fine, 100.0 * rep.verdict.sup_growth));
}

// 4. John-Nirenberg moments of ln|X|: alpha=0.5 stable under refinement,
//    alpha=3*dim diverging (>= 10x).
void criterion_4() {
    const auto u_lo = tabulate_radial_log(2, 129, 1.0);
    const auto u_hi = tabulate_radial_log(2, 257, 1.0);
    const BallSpec B1{{0.0, 0.0, 0.0}, 1.0};
    const double lo_small = john_nirenberg_moment(u_lo, B1, 0.5).value;
    const double hi_small = john_nirenberg_moment(u_hi, B1, 0.5).value;
    const double lo_big = john_nirenberg_moment(u_lo, B1, 6.0).value;
    const double hi_big = john_nirenberg_moment(u_hi, B1, 6.0).value;
    const double drift = std::abs(hi_small - lo_small) / lo_small;
    const double growth = hi_big / lo_big;
    const bool ok = std::isfinite(hi_small) && drift <= 0.05 && growth >= 10.0;
    report(4, ok, "John-Nirenberg integrability switch",
           fmt("alpha=0.5: %.5f -> %.5f (drift %.2f%%); alpha=6: growth %.1fx", lo_small,
               hi_small, 100.0 * drift, growth));
}

// 5. Weak-norm estimator: |X|^{-1.8} at q = dim/p on 1e6 uniform samples is
//    within 3% of |B_1|^{p/dim}; Chebyshev holds on 100 random piecewise
//    functions with zero violations.
void criterion_5() {
    const double p = 1.8, q = 2.0 / p;
    auto cloud = sample_unit_ball(2, 1000000, 2024);
    for (std::size_t s = 0; s < cloud.values.size(); ++s) {
        const double x = cloud.points[2 * s], y = cloud.points[2 * s + 1];
        cloud.values[s] = std::pow(x * x + y * y, -p / 2.0);
    }
    const double estimate = weak_lebesgue_norm(cloud, q);
    const double exact = std::pow(M_PI, p / 2.0);
    const double rel = std::abs(estimate - exact) / exact;

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif;
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SampleCloud f;
        f.dim = 2;
        f.weight = 0.005 + unif(rng);
        f.values.resize(50 + static_cast<std::size_t>(unif(rng) * 500));
        for (auto& v : f.values) {
            const double u = unif(rng);
            v = u < 0.25 ? 0.0 : u < 0.6 ? 3.0 * unif(rng) : std::pow(unif(rng) + 1e-4, -0.7);
        }
        const double qq = 0.5 + 4.0 * unif(rng);
        if (weak_lebesgue_norm(f, qq) > lebesgue_norm(f, qq) * (1.0 + 1e-12)) ++violations;
    }
    const bool ok = rel <= 0.03 && violations == 0;
    report(5, ok, "weak-norm estimator",
           fmt("estimate=%.4f exact=%.4f rel=%.2f%%; chebyshev violations=%d/100", estimate,
               exact, 100.0 * rel, violations));
}

// 6. Gradient correctness: energy_gradient vs central differences, relative
//    error <= 1e-6, 20 random instances on a 9x9 grid.
void criterion_6() {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss;
    const double ps[] = {1.5, 2.0, 3.0};
    const double epss[] = {0.1, 1e-3};
    bool ok = true;
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const double p = ps[inst % 3];
        const double eps = epss[inst % 2];
        auto field = make_field(p, 2, CoefficientField::constant(1.0), true);
        GridFunction u(2, 9), f(2, 9);
        for (auto& v : u.values) v = gauss(rng);
        for (auto& v : f.values) v = gauss(rng);
        const auto g = energy_gradient(u, f, field, eps);
        GridFunction probe = u;
        double scale = 0.0, diff = 0.0;
        const double delta = 1e-6;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u.mask[i] != NodeMask::Interior) continue;
            probe.values[i] = u.values[i] + delta;
            const double ep = discrete_energy(probe, f, field, eps);
            probe.values[i] = u.values[i] - delta;
            const double em = discrete_energy(probe, f, field, eps);
            probe.values[i] = u.values[i];
            const double fd = (ep - em) / (2.0 * delta);
            scale = std::max(scale, std::abs(fd));
            diff = std::max(diff, std::abs(fd - g.values[i]));
        }
        const double rel = diff / scale;
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-6;
    }
    report(6, ok, "gradient vs finite differences", fmt("20 instances, worst rel=%.2e", worst));
}

// 7. Scaling law: the weak-norm column is constant to 2% at the critical
//    alpha, strictly decreasing below it, strictly increasing above it.
void criterion_7() {
    const double p = 1.8, theta = 1.5;
    const double crit = p / (p - 1.0) * (theta - 1.0) / theta;
    const auto f = SourceRule::radial_power(1.0, -p / theta);

    const auto at = check_scaling_law(f, 2, 257, p, theta, crit, 0.5, 4);
    double lo = at.rows[0].weak_norm, hi = lo;
    for (const auto& row : at.rows) {
        lo = std::min(lo, row.weak_norm);
        hi = std::max(hi, row.weak_norm);
    }
    const double spread = (hi - lo) / lo;

    const auto sub = check_scaling_law(f, 2, 257, p, theta, crit - 0.2, 0.5, 4);
    bool strictly_down = true;
    for (std::size_t i = 1; i < sub.rows.size(); ++i)
        strictly_down = strictly_down && sub.rows[i].weak_norm < sub.rows[i - 1].weak_norm;

    const auto super = check_scaling_law(f, 2, 257, p, theta, crit + 0.2, 0.5, 4);
    bool strictly_up = true;
    for (std::size_t i = 1; i < super.rows.size(); ++i)
        strictly_up = strictly_up && super.rows[i].weak_norm > super.rows[i - 1].weak_norm;

    const bool ok = spread <= 0.02 && strictly_down && strictly_up && !super.nonincreasing &&
                    at.nonincreasing;
    report(7, ok, "rescaled-source weak norms",
           fmt("critical spread=%.2f%%, subcritical decreasing=%d, supercritical increasing=%d",
               100.0 * spread, strictly_down ? 1 : 0, strictly_up ? 1 : 0));
}

// 8. Linear-case regression: the p=2 path satisfies the classical 5-point
//    equations on a manufactured quadratic, and converges at second order on
//    a quartic (error ratio >= 3.5 per halving of h).
void criterion_8() {
    const auto field = make_field(2.0, 2, CoefficientField::constant(1.0), true);
    SolveConfig config;

    // (a) quadratic: x^2 + y^2, -lap = -4; discretely exact
    GridFunction f(2, 129);
    for (auto& v : f.values) v = -4.0;
    auto quad = [](const Point& X) { return X[0] * X[0] + X[1] * X[1]; };
    const auto rep = solve(f, field, quad, config);
    double residual = 0.0, f_scale = 0.0, exact_err = 0.0;
    const auto& u = rep.solution;
    const double h2 = u.h * u.h;
    for (int j = 1; j < u.m - 1; ++j)
        for (int i = 1; i < u.m - 1; ++i) {
            const std::size_t idx = u.index(i, j);
            if (u.mask[idx] != NodeMask::Interior) continue;
            const double lap = (u.values[idx - 1] + u.values[idx + 1] + u.values[idx - u.m] +
                                u.values[idx + u.m] - 4.0 * u.values[idx]) /
                               h2;
            residual += (-lap - f.values[idx]) * (-lap - f.values[idx]);
            f_scale += f.values[idx] * f.values[idx];
            exact_err = std::max(exact_err, std::abs(u.values[idx] - quad(u.node(idx))));
        }
    const double rel_residual = std::sqrt(residual / f_scale);

    // (b) quartic: x^4 + y^4, -lap = -12(x^2+y^2); genuine O(h^2) error
    auto quart = [](const Point& X) {
        return X[0] * X[0] * X[0] * X[0] + X[1] * X[1] * X[1] * X[1];
    };
    std::vector<double> errs;
    for (int m : {65, 129, 257}) {
        GridFunction fq(2, m);
        for (std::size_t i = 0; i < fq.size(); ++i) {
            const Point X = fq.node(i);
            fq.values[i] = -12.0 * (X[0] * X[0] + X[1] * X[1]);
        }
        const auto r = solve(fq, field, quart, config);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.solution.size(); ++i)
            if (r.solution.mask[i] == NodeMask::Interior)
                worst = std::max(worst,
                                 std::abs(r.solution.values[i] - quart(r.solution.node(i))));
        errs.push_back(worst);
    }
    const double ratio1 = errs[0] / errs[1];
    const double ratio2 = errs[1] / errs[2];
    const bool ok = rel_residual <= config.grad_tol && exact_err < 1e-7 && ratio1 >= 3.5 &&
                    ratio2 >= 3.5;
    report(8, ok, "p=2 reduction to the 5-point scheme",
           fmt("5-point residual=%.2e (tol %.0e), quadratic max err=%.2e, quartic ratios "
               "%.2f / %.2f",
               rel_residual, config.grad_tol, exact_err, ratio1, ratio2));
}

}  // namespace

int main() {
    criterion_1();
    criterion_6();
    criterion_5();
    criterion_7();
    criterion_4();
    criterion_8();
    criterion_3();
    criterion_2();
    std::printf(failures == 0 ? "acceptance: all criteria passed\n"
                              : "acceptance: %d criterion(s) failed\n",
                failures);
    return failures == 0 ? 0 : 1;
}
