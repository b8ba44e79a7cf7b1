#include "plab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace plab {

RadialProfile RadialProfile::power(double c, double beta, double cap) {
    RadialProfile f;
    f.kind = Kind::Power;
    f.c = c;
    f.beta = beta;
    f.cap = cap;
    return f;
}

RadialProfile RadialProfile::log(double c, double cap) {
    RadialProfile f;
    f.kind = Kind::Log;
    f.c = c;
    f.cap = cap;
    return f;
}

RadialProfile RadialProfile::tabulated(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 2)
        throw std::invalid_argument("RadialProfile: tabulation needs matching arrays, size >= 2");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw std::invalid_argument("RadialProfile: r-grid must be strictly increasing");
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument("RadialProfile: tabulated values must be finite");
    RadialProfile f;
    f.kind = Kind::Tabulated;
    f.r = std::move(r);
    f.v = std::move(v);
    return f;
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

}  // namespace

double RadialProfile::operator()(double radius) const {
    const double rr = cap > 0.0 ? std::max(radius, cap) : radius;
    switch (kind) {
        case Kind::Power: return c * std::pow(rr, beta);
        case Kind::Log: return c * std::log(rr);
        case Kind::Tabulated: return interp(r, v, radius);
    }
    return 0.0;
}

std::pair<double, double> p_laplacian_of_power(double p, int n, double beta) {
    if (!(p > 1.0)) throw std::invalid_argument("p_laplacian_of_power: need p > 1");
    if (beta == 0.0)
        throw std::invalid_argument("p_laplacian_of_power: beta = 0 is the constant case");
    const double e = (beta - 1.0) * (p - 1.0) - 1.0;
    const double c = beta * std::pow(std::abs(beta), p - 2.0) * ((beta - 1.0) * (p - 1.0) + n - 1);
    return {c, e};
}

std::pair<double, double> p_laplacian_of_log(double p, int n, double c) {
    if (!(p > 1.0)) throw std::invalid_argument("p_laplacian_of_log: need p > 1");
    if (!(c > 0.0)) throw std::invalid_argument("p_laplacian_of_log: need c > 0");
    return {std::pow(c, p - 1.0) * (n - p), -p};
}

double log_solution_constant(double p, int n) {
    if (!(p > 1.0 && p < n)) throw std::invalid_argument("log_solution_constant: need 1 < p < n");
    return std::pow(n - p, -1.0 / (p - 1.0));
}

namespace {

// ∫_0^{r0} s^{n-1} f(s) ds in closed form where the profile allows it.
double head_integral(const RadialProfile& f, int n, double r0) {
    switch (f.kind) {
        case RadialProfile::Kind::Power: {
            if (f.cap > 0.0 && r0 <= f.cap)
                return f.c * std::pow(f.cap, f.beta) * std::pow(r0, n) / n;
            double acc = 0.0;
            double lo = 0.0;
            if (f.cap > 0.0) {
                acc += f.c * std::pow(f.cap, f.beta) * std::pow(f.cap, n) / n;
                lo = f.cap;
            }
            // ∫ s^{n-1+beta}: requires n + beta > 0 when lo = 0 (checked by the caller)
            if (n + f.beta == 0.0)
                acc += f.c * std::log(r0 / lo);
            else
                acc += f.c *
                       (std::pow(r0, n + f.beta) - std::pow(lo, n + f.beta)) / (n + f.beta);
            return acc;
        }
        case RadialProfile::Kind::Log: {
            if (f.cap > 0.0 && r0 <= f.cap)
                return f.c * std::log(f.cap) * std::pow(r0, n) / n;
            double acc = 0.0;
            double lo = 0.0;
            auto prim = [&](double s) {  // ∫ s^{n-1} ln s ds
                return std::pow(s, n) * (std::log(s) - 1.0 / n) / n;
            };
            if (f.cap > 0.0) {
                acc += f.c * std::log(f.cap) * std::pow(f.cap, n) / n;
                lo = f.cap;
            }
            acc += f.c * (prim(r0) - (lo > 0.0 ? prim(lo) : 0.0));
            return acc;
        }
        case RadialProfile::Kind::Tabulated:
            return 0.0;  // tabulations start at their own r.front(); the head is negligible
    }
    return 0.0;
}

struct RadialRun {
    std::vector<double> r, u, flux;
};

RadialRun run_quadrature(const RadialProfile& f, double p, int n, double boundary, int nodes,
                         double r_min) {
    const int cells = nodes - 1;
    const double ratio = std::pow(1.0 / r_min, 1.0 / cells);
    RadialRun out;
    out.r.resize(nodes);
    for (int i = 0; i < nodes; ++i) out.r[i] = r_min * std::pow(ratio, i);
    out.r.back() = 1.0;

    // cumulative source integral I(r) = ∫_0^r s^{n-1} f ds at nodes and cell midpoints
    std::vector<double> I_node(nodes), I_mid(cells);
    I_node[0] = head_integral(f, n, r_min);
    for (int i = 0; i < cells; ++i) {
        const double a = out.r[i], b = out.r[i + 1];
        const double mid = 0.5 * (a + b);
        const double q1 = 0.5 * (a + mid);  // midpoint of the lower half cell
        I_mid[i] = I_node[i] + (mid - a) * std::pow(q1, n - 1) * f(q1);
        I_node[i + 1] = I_node[i] + (b - a) * std::pow(mid, n - 1) * f(mid);
    }

    const double inv_pm1 = 1.0 / (p - 1.0);
    auto slope = [&](double radius, double I) {
        const double phi = std::pow(radius, 1.0 - n) * I;
        return phi >= 0.0 ? std::pow(phi, inv_pm1) : -std::pow(-phi, inv_pm1);  // -u'
    };

    out.u.resize(nodes);
    out.u.back() = boundary;
    for (int i = cells - 1; i >= 0; --i) {
        const double a = out.r[i], b = out.r[i + 1];
        out.u[i] = out.u[i + 1] + (b - a) * slope(0.5 * (a + b), I_mid[i]);
    }
    out.flux.resize(nodes);
    for (int i = 0; i < nodes; ++i)
        out.flux[i] = -std::pow(out.r[i], 1.0 - n) * I_node[i];  // |u'|^{p-2}u' = -Phi
    return out;
}

}  // namespace

RadialSolveResult solve_radial_dirichlet(const RadialProfile& f, double p, int n, double boundary,
                                         int nodes, double r_min, double tol) {
    if (!(p > 1.0)) throw std::invalid_argument("solve_radial_dirichlet: need p > 1");
    if (n < 2) throw std::invalid_argument("solve_radial_dirichlet: need n >= 2");
    if (nodes < 16) throw std::invalid_argument("solve_radial_dirichlet: need nodes >= 16");
    if (!(r_min > 0.0 && r_min < 0.5))
        throw std::invalid_argument("solve_radial_dirichlet: r_min in (0, 0.5)");
    if (f.kind == RadialProfile::Kind::Power && f.cap == 0.0 && f.c != 0.0 && f.beta <= -n)
        throw std::invalid_argument(
            "solve_radial_dirichlet: power source not integrable (need exponent > -n)");

    const RadialRun fine = run_quadrature(f, p, n, boundary, nodes, r_min);
    const RadialRun coarse = run_quadrature(f, p, n, boundary, nodes / 2, r_min);

    RadialSolveResult res;
    res.r = fine.r;
    res.u = fine.u;
    res.flux = fine.flux;
    res.quadrature_nodes = nodes;

    double scale = 0.0;
    for (double v : fine.u) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, 1e-300);
    double delta = 0.0;
    for (int k = 0; k <= 64; ++k) {  // probe on log-spaced radii
        const double radius = std::pow(r_min, 1.0 - k / 64.0);
        const double a = interp(fine.r, fine.u, radius);
        const double b = interp(coarse.r, coarse.u, radius);
        delta = std::max(delta, std::abs(a - b));
    }
    res.refinement_delta = delta / scale;
    res.converged = res.refinement_delta <= tol;
    return res;
}

double RadialSolveResult::value_at(double radius) const { return interp(r, u, radius); }
double RadialSolveResult::flux_at(double radius) const { return interp(r, flux, radius); }

void write_radial_csv(const RadialSolveResult& res, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "r,u\n";
    char buf[80];
    for (std::size_t i = 0; i < res.r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", res.r[i], res.u[i]);
        out << buf;
    }
}

}  // namespace plab
