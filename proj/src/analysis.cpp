#include "plab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

namespace plab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

}  // namespace

DyadicDecayReport dyadic_decay(const GridFunction& u, const Point& center, double lambda, double p,
                               int max_levels, int min_nodes) {
    if (!(lambda > 0.0 && lambda <= 0.5))
        throw std::invalid_argument("dyadic_decay: lambda in (0, 1/2]");
    if (norm2(center) > 0.5 + 1e-12)
        throw std::invalid_argument("dyadic_decay: center must lie in B_{1/2}");
    if (max_levels < 3) throw std::invalid_argument("dyadic_decay: need at least 3 levels");

    DyadicDecayReport rep;
    rep.center = center;
    rep.lambda = lambda;
    rep.exponent = p;

    const double band_inner = 1.0 - u.band_width * u.h;
    for (int k = 1; k <= max_levels; ++k) {
        DecayLevel lvl;
        lvl.k = k;
        lvl.radius = std::pow(lambda, k);
        const BallSpec ball{center, lvl.radius};
        lvl.nodes = nodes_in_ball(u, ball);
        if (lvl.nodes == 0) {
            lvl.used = false;
            rep.levels.push_back(lvl);
            continue;
        }
        lvl.c_k = ball_average(u, ball);
        lvl.osc_k = mean_oscillation(u, ball, p);
        // fit window: drop balls reaching the Dirichlet band or under-resolved
        lvl.used = norm2(center) + lvl.radius < band_inner &&
                   lvl.nodes >= static_cast<std::size_t>(min_nodes);
        rep.levels.push_back(lvl);
    }

    std::vector<double> xs, ys;
    int usable = 0;
    for (const auto& lvl : rep.levels) {
        if (!lvl.used) continue;
        ++usable;
        if (lvl.osc_k > 0.0) {
            xs.push_back(lvl.k * std::log(lambda));
            ys.push_back(std::log(lvl.osc_k));
        }
    }
    if (usable < 3) throw std::invalid_argument("dyadic_decay: fewer than 3 usable levels");
    if (xs.size() < 2) {
        rep.degenerate = true;
        rep.fitted_alpha = kInf;
        return rep;
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= xs.size();
    ym /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    rep.fitted_alpha = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fitted = ym + rep.fitted_alpha * (xs[i] - xm);
        ss += (ys[i] - fitted) * (ys[i] - fitted);
    }
    rep.fit_residual = std::sqrt(ss / xs.size());
    return rep;
}

HolderFit fit_holder_exponent(const GridFunction& u, const std::vector<Point>& centers,
                              double lambda, double p, int max_levels, int min_nodes) {
    if (centers.empty()) throw std::invalid_argument("fit_holder_exponent: need >= 1 center");
    HolderFit fit;
    fit.alpha = kInf;
    for (const auto& c : centers) {
        fit.per_center.push_back(dyadic_decay(u, c, lambda, p, max_levels, min_nodes));
        if (!fit.per_center.back().degenerate)
            fit.alpha = std::min(fit.alpha, fit.per_center.back().fitted_alpha);
    }
    fit.degenerate = !std::isfinite(fit.alpha);
    return fit;
}

SourceRule SourceRule::radial_power(double amplitude, double exponent) {
    SourceRule s;
    s.kind = Kind::RadialPower;
    s.amplitude = amplitude;
    s.exponent = exponent;
    return s;
}

SourceRule SourceRule::radial_log(double amplitude) {
    SourceRule s;
    s.kind = Kind::RadialLog;
    s.amplitude = amplitude;
    return s;
}

GridFunction SourceRule::tabulate(int dim, int m, int band_width) const {
    switch (kind) {
        case Kind::Zero: return GridFunction(dim, m, band_width);
        case Kind::RadialPower: return tabulate_radial_power(dim, m, amplitude, exponent, band_width);
        case Kind::RadialLog: return tabulate_radial_log(dim, m, amplitude, band_width);
    }
    return GridFunction(dim, m, band_width);
}

RadialProfile SourceRule::radial_profile(double cap) const {
    switch (kind) {
        case Kind::Zero: return RadialProfile::power(0.0, 1.0);
        case Kind::RadialPower: return RadialProfile::power(amplitude, exponent, cap);
        case Kind::RadialLog: return RadialProfile::log(amplitude, cap);
    }
    return RadialProfile::power(0.0, 1.0);
}

BoundaryData BoundaryData::constant(double v) {
    BoundaryData b;
    b.kind = Kind::Constant;
    b.value = v;
    return b;
}

BoundaryData BoundaryData::radial_power(double amplitude, double beta) {
    BoundaryData b;
    b.kind = Kind::RadialPower;
    b.value = amplitude;
    b.beta = beta;
    return b;
}

BoundaryRule BoundaryData::rule() const {
    if (kind == Kind::Constant) {
        const double v = value;
        return [v](const Point&) { return v; };
    }
    const double a = value, b = beta;
    return [a, b](const Point& X) { return a * std::pow(norm2(X), b); };
}

std::optional<double> Scenario::predicted_alpha() const {
    if (!theta) return std::nullopt;
    const double p = field.p;
    return std::min(p / (p - 1.0) * (*theta - 1.0) / *theta, alpha0);
}

namespace {

std::vector<Point> default_centers(int dim) {
    std::vector<Point> centers{{0.0, 0.0, 0.0}};
    centers.push_back({0.25, 0.0, 0.0});
    centers.push_back({-0.25, 0.0, 0.0});
    centers.push_back({0.0, 0.25, 0.0});
    if (dim == 3) centers.push_back({0.0, 0.0, 0.25});
    return centers;
}

}  // namespace

double estimate_alpha0(const FieldSpec& field, int boundary_samples, const SolveConfig& config,
                       int resolution, std::uint64_t seed) {
    if (boundary_samples < 1) throw std::invalid_argument("estimate_alpha0: need >= 1 sample");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;

    const GridFunction zero(field.dim, resolution);
    const auto centers = default_centers(field.dim);
    double worst = kInf;
    for (int s = 0; s < boundary_samples; ++s) {
        // random oscillatory Dirichlet data: a few plane waves across B_1
        struct Wave {
            double k[3], phase, amp;
        };
        std::vector<Wave> waves(4);
        for (auto& wv : waves) {
            for (int d = 0; d < 3; ++d)
                wv.k[d] = d < field.dim ? M_PI * (1.0 + 2.0 * unif(rng)) : 0.0;
            wv.phase = 2.0 * M_PI * unif(rng);
            wv.amp = gauss(rng);
        }
        BoundaryRule g = [waves](const Point& X) {
            double acc = 0.0;
            for (const auto& wv : waves)
                acc += wv.amp *
                       std::sin(wv.k[0] * X[0] + wv.k[1] * X[1] + wv.k[2] * X[2] + wv.phase);
            return acc;
        };
        const SolveReport rep = solve(zero, field, g, config);
        const HolderFit fit = fit_holder_exponent(rep.solution, centers, 0.5, field.p, 6, 100);
        if (!fit.degenerate) worst = std::min(worst, std::min(fit.alpha, 1.0));
    }
    if (!std::isfinite(worst)) return 1.0;  // constant-like data; classical smoothness
    return worst;
}

ScalingLawReport check_scaling_law(const SourceRule& f, int dim, int resolution, double p,
                                   double theta, double alpha, double lambda, int levels) {
    if (!(lambda > 0.0 && lambda <= 0.5))
        throw std::invalid_argument("check_scaling_law: lambda in (0, 1/2]");
    if (levels < 1) throw std::invalid_argument("check_scaling_law: levels >= 1");
    ScalingLawReport rep;
    rep.p = p;
    rep.theta = theta;
    rep.alpha = alpha;
    rep.lambda = lambda;
    rep.q = theta * dim / p;

    GridFunction base(dim, resolution);
    const double cap = base.origin_cap();
    const double rate = p - (p - 1.0) * alpha;
    for (int m = 0; m <= levels; ++m) {
        const double shrink = std::pow(lambda, m);
        const double factor = std::pow(shrink, rate);
        GridFunction fm(dim, resolution);
        for (std::size_t i = 0; i < fm.size(); ++i) {
            Point X = fm.node(i);
            for (auto& x : X) x *= shrink;
            double value = 0.0;
            switch (f.kind) {
                case SourceRule::Kind::Zero: break;
                case SourceRule::Kind::RadialPower:
                    value = f.amplitude * std::pow(std::max(norm2(X), cap), f.exponent);
                    break;
                case SourceRule::Kind::RadialLog:
                    value = f.amplitude * std::log(std::max(norm2(X), cap));
                    break;
            }
            fm.values[i] = factor * value;
        }
        rep.rows.push_back({m, factor, weak_lebesgue_norm(fm, rep.q)});
    }
    rep.nonincreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].weak_norm > rep.rows[i - 1].weak_norm * (1.0 + 1e-3))
            rep.nonincreasing = false;
    return rep;
}

ScenarioReport run_scenario(const Scenario& s) {
    ScenarioReport rep;
    rep.name = s.name;
    rep.p = s.field.p;
    rep.theta = s.theta;
    rep.resolution_coarse = s.resolution;
    rep.resolution_fine = 2 * s.resolution - 1;

    rep.alpha0 = s.measure_alpha0
                     ? estimate_alpha0(s.field, 3, s.solver, std::min(s.resolution, 65), s.seed)
                     : s.alpha0;

    const int dims = s.field.dim;
    const auto boundary = s.boundary.rule();
    const GridFunction f_lo = s.source.tabulate(dims, rep.resolution_coarse);
    const GridFunction f_hi = s.source.tabulate(dims, rep.resolution_fine);
    rep.cap_coarse = f_lo.origin_cap();
    rep.cap_fine = f_hi.origin_cap();

    rep.solve_coarse = solve(f_lo, s.field, boundary, s.solver);
    rep.solve_fine = solve(f_hi, s.field, boundary, s.solver);
    const GridFunction& u_lo = rep.solve_coarse.solution;
    const GridFunction& u_hi = rep.solve_fine.solution;

    const auto centers = s.diagnostics.centers.empty() ? default_centers(dims)
                                                       : s.diagnostics.centers;
    const HolderFit fit = fit_holder_exponent(u_hi, centers, s.diagnostics.lambda, s.field.p,
                                              s.diagnostics.max_levels, s.diagnostics.min_nodes);
    rep.decay = fit.per_center;

    rep.bmo_coarse = bmo_seminorm(u_lo);
    rep.bmo_fine = bmo_seminorm(u_hi);
    rep.sup_coarse = u_lo.max_abs();
    rep.sup_fine = u_hi.max_abs();

    const double theta_q = s.theta ? *s.theta * dims / s.field.p : dims / s.field.p;
    auto add_row = [&](const std::string& what, const std::string& params, double value, int res,
                       double cap) { rep.norm_table.push_back({what, params, value, res, cap}); };
    add_row("weak_lq_f", fmt("q=%.6g", theta_q), weak_lebesgue_norm(f_lo, theta_q),
            rep.resolution_coarse, rep.cap_coarse);
    add_row("weak_lq_f", fmt("q=%.6g", theta_q), weak_lebesgue_norm(f_hi, theta_q),
            rep.resolution_fine, rep.cap_fine);
    add_row("weak_lnp_f", fmt("q=%.6g", dims / s.field.p),
            weak_lebesgue_norm(f_hi, dims / s.field.p), rep.resolution_fine, rep.cap_fine);
    add_row("lq_f", fmt("q=%.6g", theta_q), lebesgue_norm(f_hi, theta_q), rep.resolution_fine,
            rep.cap_fine);
    add_row("lp_u", fmt("q=%.6g", s.field.p), lebesgue_norm(u_hi, s.field.p), rep.resolution_fine,
            rep.cap_fine);
    add_row("bmo_u", "family=dyadic", rep.bmo_coarse, rep.resolution_coarse, rep.cap_coarse);
    add_row("bmo_u", "family=dyadic", rep.bmo_fine, rep.resolution_fine, rep.cap_fine);
    add_row("sup_u", "", rep.sup_coarse, rep.resolution_coarse, rep.cap_coarse);
    add_row("sup_u", "", rep.sup_fine, rep.resolution_fine, rep.cap_fine);
    const auto jn = john_nirenberg_moment(u_hi, {{0.0, 0.0, 0.0}, 1.0}, 0.5);
    add_row("jn_moment_u", "alpha=0.5;ball=B1", jn.value, rep.resolution_fine, rep.cap_fine);
    // theorem right-hand side ||f||^{1/(p-1)} + ||u||_{L^p} and the measured ratio
    const double rhs = std::pow(weak_lebesgue_norm(f_hi, theta_q), 1.0 / (s.field.p - 1.0)) +
                       lebesgue_norm(u_hi, s.field.p);
    add_row("estimate_rhs", "", rhs, rep.resolution_fine, rep.cap_fine);
    add_row("estimate_ratio", "lhs=bmo", rep.bmo_fine / rhs, rep.resolution_fine, rep.cap_fine);

    ScenarioVerdict& v = rep.verdict;
    v.predicted_alpha = s.theta ? std::optional<double>(std::min(
                                      s.field.p / (s.field.p - 1.0) * (*s.theta - 1.0) / *s.theta,
                                      rep.alpha0))
                                : std::nullopt;
    v.fitted_alpha = fit.alpha;
    double residual = 0.0;
    for (const auto& d : rep.decay)
        if (!d.degenerate && d.fitted_alpha == fit.alpha) residual = d.fit_residual;
    v.fit_residual = residual;
    v.bmo_change = std::abs(rep.bmo_fine - rep.bmo_coarse) / std::max(rep.bmo_coarse, 1e-300);
    v.sup_growth = (rep.sup_fine - rep.sup_coarse) / std::max(rep.sup_coarse, 1e-300);
    v.bmo_stable = v.bmo_change <= s.diagnostics.bmo_stability_threshold;
    v.sup_growing = v.sup_growth >= s.diagnostics.sup_growth_threshold;
    v.solver_converged = rep.solve_coarse.converged && rep.solve_fine.converged;
    if (v.predicted_alpha) {
        v.exponent_within_tolerance =
            std::abs(v.fitted_alpha - *v.predicted_alpha) <= s.diagnostics.fit_tolerance;
        std::string tag = v.exponent_within_tolerance ? "exponent-sharp"
                          : v.fitted_alpha > *v.predicted_alpha ? "smoother-than-predicted"
                                                                : "below-predicted";
        v.summary = tag;
    } else {
        v.summary = std::string(v.bmo_stable ? "BMO-stable" : "BMO-unstable") + ", " +
                    (v.sup_growing ? "sup-growing" : "sup-bounded");
    }
    if (!v.solver_converged) v.summary += ", solver-not-converged";
    return rep;
}

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

}  // namespace

void write_norm_table_csv(const std::vector<NormRow>& rows, const std::string& path) {
    std::string out = "quantity,parameters,value,resolution,cap\n";
    for (const auto& r : rows)
        out += fmt("%s,%s,%.12g,%d,%.12g\n", r.quantity.c_str(), r.parameters.c_str(), r.value,
                   r.resolution, r.cap);
    write_text(path, out);
}

void write_decay_csv(const DyadicDecayReport& rep, const std::string& path) {
    std::string out = fmt("# center=%.6g,%.6g,%.6g lambda=%.6g exponent=%.6g fitted_alpha=%.12g "
                          "residual=%.6g degenerate=%d\n",
                          rep.center[0], rep.center[1], rep.center[2], rep.lambda, rep.exponent,
                          rep.fitted_alpha, rep.fit_residual, rep.degenerate ? 1 : 0);
    out += "k,radius,c_k,osc_k,nodes,used\n";
    for (const auto& l : rep.levels)
        out += fmt("%d,%.12g,%.12g,%.12g,%zu,%d\n", l.k, l.radius, l.c_k, l.osc_k, l.nodes,
                   l.used ? 1 : 0);
    write_text(path, out);
}

void write_scaling_csv(const ScalingLawReport& rep, const std::string& path) {
    std::string out = fmt("# p=%.6g theta=%.6g alpha=%.12g lambda=%.6g q=%.12g nonincreasing=%d\n",
                          rep.p, rep.theta, rep.alpha, rep.lambda, rep.q,
                          rep.nonincreasing ? 1 : 0);
    out += "level,factor,weak_norm\n";
    for (const auto& r : rep.rows)
        out += fmt("%d,%.12g,%.12g\n", r.level, r.factor, r.weak_norm);
    write_text(path, out);
}

void write_scenario_report(const ScenarioReport& rep, const std::string& directory,
                           bool with_timestamp) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const auto& v = rep.verdict;

    std::string summary;
    summary += "scenario=" + rep.name + "\n";
    summary += fmt("p=%.12g\n", rep.p);
    if (rep.theta) summary += fmt("theta=%.12g\n", *rep.theta);
    summary += fmt("alpha0_surrogate=%.12g\n", rep.alpha0);
    summary += fmt("resolution_coarse=%d\nresolution_fine=%d\n", rep.resolution_coarse,
                   rep.resolution_fine);
    summary += fmt("cap_coarse=%.12g\ncap_fine=%.12g\n", rep.cap_coarse, rep.cap_fine);
    if (v.predicted_alpha) summary += fmt("predicted_alpha=%.12g\n", *v.predicted_alpha);
    summary += fmt("fitted_alpha=%.12g\n", v.fitted_alpha);
    summary += fmt("fit_residual=%.12g\n", v.fit_residual);
    summary += fmt("bmo_coarse=%.12g\nbmo_fine=%.12g\nbmo_change=%.12g\n", rep.bmo_coarse,
                   rep.bmo_fine, v.bmo_change);
    summary += fmt("sup_coarse=%.12g\nsup_fine=%.12g\nsup_growth=%.12g\n", rep.sup_coarse,
                   rep.sup_fine, v.sup_growth);
    summary += fmt("solver_converged=%d\n", v.solver_converged ? 1 : 0);
    summary += "verdict=" + v.summary + "\n";
    if (with_timestamp) {
        const std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        summary += std::string("written_at=") + buf + "\n";
    }
    write_text((fs::path(directory) / "summary.txt").string(), summary);

    write_norm_table_csv(rep.norm_table, (fs::path(directory) / "norms.csv").string());
    for (std::size_t i = 0; i < rep.decay.size(); ++i)
        write_decay_csv(rep.decay[i],
                        (fs::path(directory) / fmt("decay_%02zu.csv", i)).string());
    write_grid_csv(rep.solve_coarse.solution,
                   (fs::path(directory) / "solution_coarse.csv").string());
    write_grid_csv(rep.solve_fine.solution, (fs::path(directory) / "solution_fine.csv").string());
    write_solve_summary(rep.solve_coarse, (fs::path(directory) / "solve_coarse.txt").string());
    write_solve_summary(rep.solve_fine, (fs::path(directory) / "solve_fine.txt").string());
}

}  // namespace plab
