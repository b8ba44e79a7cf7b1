#pragma once

#include <string>
#include <utility>
#include <vector>

namespace plab {

/// Scalar function of the radius r in (0,1], by closed form or tabulation.
/// Power and log kinds optionally floor the radius at `cap` so grid sources
/// and their radial oracles share the same regularization.
struct RadialProfile {
    enum class Kind { Power, Log, Tabulated };

    Kind kind = Kind::Power;
    double c = 1.0;     // power: c*r^beta ; log: c*ln r
    double beta = 0.0;  // power exponent
    double cap = 0.0;   // r -> max(r, cap) when > 0
    std::vector<double> r;  // tabulated abscissae, strictly increasing
    std::vector<double> v;

    static RadialProfile power(double c, double beta, double cap = 0.0);
    static RadialProfile log(double c, double cap = 0.0);
    static RadialProfile tabulated(std::vector<double> r, std::vector<double> v);

    double operator()(double radius) const;
};

/// Δ_p(r^beta) = c * r^e with e = (beta-1)(p-1) - 1 and
/// c = beta |beta|^{p-2} ((beta-1)(p-1) + n - 1). Sign convention
/// Δ_p u = div(|Du|^{p-2} Du).
std::pair<double, double> p_laplacian_of_power(double p, int n, double beta);

/// Δ_p(c ln r) = c^{p-1} (n-p) r^{-p}; returns (c^{p-1}(n-p), -p).
std::pair<double, double> p_laplacian_of_log(double p, int n, double c);

/// The constant k with -Δ_p(k ln(1/r)) = r^{-p}, i.e. k = (n-p)^{-1/(p-1)}.
double log_solution_constant(double p, int n);

struct RadialSolveResult {
    std::vector<double> r;     // geometric quadrature grid, r.front()=r_min, r.back()=1
    std::vector<double> u;     // u(r_i), u.back() = boundary exactly
    std::vector<double> flux;  // |u'|^{p-2} u' (r_i)
    int quadrature_nodes = 0;
    double refinement_delta = 0.0;  // relative change against the half-resolution run
    bool converged = true;

    double value_at(double radius) const;  // linear interpolation, clamped
    double flux_at(double radius) const;
};

/// Solves -Δ_p u = f on (0,1) with u(1) = boundary by exact flux quadrature:
/// Phi(r) = r^{1-n} ∫_0^r s^{n-1} f(s) ds, u'(r) = -sign(Phi)|Phi|^{1/(p-1)}.
/// Composite midpoint on a geometric grid clustered at r_min; the integral
/// over [0, r_min] is closed-form for power/log profiles.
RadialSolveResult solve_radial_dirichlet(const RadialProfile& f, double p, int n, double boundary,
                                         int nodes, double r_min = 1e-6, double tol = 1e-8);

/// Two-column CSV (r, u).
void write_radial_csv(const RadialSolveResult& res, const std::string& path);

}  // namespace plab
