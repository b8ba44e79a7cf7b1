#include "plab/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace plab {

namespace {

struct CellGeometry {
    int dim = 2;
    int m = 0;
    std::size_t stride[3] = {0, 0, 0};  // node strides along each axis
    std::size_t cell_count = 0;

    explicit CellGeometry(const GridFunction& g) : dim(g.dim), m(g.m) {
        stride[0] = 1;
        stride[1] = static_cast<std::size_t>(m);
        stride[2] = static_cast<std::size_t>(m) * m;
        const std::size_t mm = static_cast<std::size_t>(m - 1);
        cell_count = dim == 2 ? mm * mm : mm * mm * mm;
    }

    void cell_ijk(std::size_t cell, int out[3]) const {
        const std::size_t mm = static_cast<std::size_t>(m - 1);
        out[0] = static_cast<int>(cell % mm);
        out[1] = static_cast<int>((cell / mm) % mm);
        out[2] = dim == 3 ? static_cast<int>(cell / (mm * mm)) : 0;
    }

    std::size_t corner(std::size_t cell) const {
        int ijk[3];
        cell_ijk(cell, ijk);
        return static_cast<std::size_t>(ijk[2]) * stride[2] +
               static_cast<std::size_t>(ijk[1]) * stride[1] + static_cast<std::size_t>(ijk[0]);
    }
};

std::vector<double> cell_weights(const GridFunction& u, const FieldSpec& field) {
    if (field.coeff.is_matrix())
        throw std::invalid_argument("solver: grid solves take scalar coefficients");
    if (field.dim != u.dim) throw std::invalid_argument("solver: field/grid dimension mismatch");
    const CellGeometry geo(u);
    std::vector<double> w(geo.cell_count);
    double X[3] = {0.0, 0.0, 0.0};
    int ijk[3];
    for (std::size_t c = 0; c < geo.cell_count; ++c) {
        geo.cell_ijk(c, ijk);
        for (int d = 0; d < u.dim; ++d) X[d] = u.coord(ijk[d]) + 0.5 * u.h;
        w[c] = field.coeff.scalar_at(std::span<const double>(X, u.dim));
    }
    return w;
}

void check_pair(const GridFunction& u, const GridFunction& f) {
    if (!u.same_layout(f)) throw std::invalid_argument("solver: u and f live on different grids");
}

double energy_kernel(const GridFunction& u, const GridFunction& f, double p, double epsilon,
                     const std::vector<double>& w) {
    const CellGeometry geo(u);
    const double cell_measure = std::pow(u.h, u.dim);
    const double inv_h = 1.0 / u.h;
    double energy = 0.0;
    for (std::size_t c = 0; c < geo.cell_count; ++c) {
        const std::size_t v0 = geo.corner(c);
        double grad_sq = epsilon * epsilon;
        for (int d = 0; d < u.dim; ++d) {
            const double g = (u.values[v0 + geo.stride[d]] - u.values[v0]) * inv_h;
            grad_sq += g * g;
        }
        energy += w[c] * std::pow(grad_sq, 0.5 * p);
    }
    energy *= cell_measure / p;
    double load = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) load += f.values[i] * u.values[i];
    // minus sign: minimizers solve -div(w |grad u|^{p-2} grad u) = f
    return energy - load * cell_measure;
}

// sigma_c = w_c (|grad|^2 + eps^2)^{(p-2)/2}; exact transpose of energy_kernel,
// zeroed outside the interior.
void gradient_kernel(const GridFunction& u, const GridFunction& f, double p, double epsilon,
                     const std::vector<double>& w, std::vector<double>& out) {
    const CellGeometry geo(u);
    const double cell_measure = std::pow(u.h, u.dim);
    const double inv_h = 1.0 / u.h;
    out.assign(u.size(), 0.0);
    for (std::size_t c = 0; c < geo.cell_count; ++c) {
        const std::size_t v0 = geo.corner(c);
        double g[3] = {0.0, 0.0, 0.0};
        double grad_sq = epsilon * epsilon;
        for (int d = 0; d < u.dim; ++d) {
            g[d] = (u.values[v0 + geo.stride[d]] - u.values[v0]) * inv_h;
            grad_sq += g[d] * g[d];
        }
        if (grad_sq == 0.0) continue;  // p < 2 with eps = 0: the cell is flat, no flux
        const double sigma = w[c] * std::pow(grad_sq, 0.5 * p - 1.0);
        for (int d = 0; d < u.dim; ++d) {
            const double flux = sigma * g[d] * inv_h * cell_measure;
            out[v0 + geo.stride[d]] += flux;
            out[v0] -= flux;
        }
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u.mask[i] == NodeMask::Interior)
            out[i] -= f.values[i] * cell_measure;
        else
            out[i] = 0.0;
    }
}

double l2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

double discrete_energy(const GridFunction& u, const GridFunction& f, const FieldSpec& field,
                       double epsilon) {
    check_pair(u, f);
    const auto w = cell_weights(u, field);
    return energy_kernel(u, f, field.p, epsilon, w);
}

GridFunction energy_gradient(const GridFunction& u, const GridFunction& f, const FieldSpec& field,
                             double epsilon) {
    check_pair(u, f);
    const auto w = cell_weights(u, field);
    GridFunction grad(u.dim, u.m, u.band_width);
    gradient_kernel(u, f, field.p, epsilon, w, grad.values);
    return grad;
}

GridFunction solve_p2_linear(const GridFunction& f, const FieldSpec& field,
                             const BoundaryRule& boundary, double tol, int max_iters) {
    GridFunction u(f.dim, f.m, f.band_width);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u.mask[i] != NodeMask::Interior) u.values[i] = boundary(u.node(i));
    const auto w = cell_weights(u, field);

    // CG on the interior block: the p=2 gradient is affine in u, so
    // A d = grad(u + d) - grad(u).
    std::vector<double> r(u.size()), d(u.size()), Ad(u.size());
    gradient_kernel(u, f, 2.0, 0.0, w, r);
    for (auto& x : r) x = -x;
    d = r;
    double rho = 0.0;
    for (double x : r) rho += x * x;
    const double rho0 = rho;
    if (rho0 == 0.0) return u;

    GridFunction probe = u;
    for (int it = 0; it < max_iters && rho > tol * tol * rho0; ++it) {
        for (std::size_t i = 0; i < u.size(); ++i) probe.values[i] = u.values[i] + d[i];
        gradient_kernel(probe, f, 2.0, 0.0, w, Ad);
        for (std::size_t i = 0; i < u.size(); ++i) Ad[i] += r[i];  // grad(u) = -r
        double dAd = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) dAd += d[i] * Ad[i];
        if (dAd <= 0.0) break;
        const double alpha = rho / dAd;
        for (std::size_t i = 0; i < u.size(); ++i) {
            u.values[i] += alpha * d[i];
            r[i] -= alpha * Ad[i];
        }
        double rho_next = 0.0;
        for (double x : r) rho_next += x * x;
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = r[i] + beta * d[i];
    }
    return u;
}

SolveReport solve(const GridFunction& f, const FieldSpec& field, const BoundaryRule& boundary,
                  const SolveConfig& config) {
    if (config.epsilon_schedule.empty())
        throw std::invalid_argument("solve: epsilon schedule must be nonempty");
    for (std::size_t i = 1; i < config.epsilon_schedule.size(); ++i)
        if (!(config.epsilon_schedule[i] < config.epsilon_schedule[i - 1]))
            throw std::invalid_argument("solve: epsilon schedule must be strictly decreasing");
    if (config.epsilon_schedule.back() < 0.0)
        throw std::invalid_argument("solve: epsilon must stay >= 0");

    SolveReport report;
    GridFunction u(f.dim, f.m, f.band_width);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u.mask[i] != NodeMask::Interior) u.values[i] = boundary(u.node(i));

    if (config.p2_warm_start)
        u = solve_p2_linear(f, field, boundary, config.cg_tol, config.cg_max_iters);

    const auto w = cell_weights(u, field);
    const double cell_measure = std::pow(u.h, u.dim);
    const double p = field.p;
    double f_scale = 0.0;
    for (double v : f.values) f_scale += v * v;
    f_scale = std::sqrt(f_scale) * cell_measure;

    std::vector<double> grad(u.size()), prev_grad(u.size());
    GridFunction trial = u;

    // problem scale for the relative stopping rule: the gradient at the plain
    // boundary-extended guess, so warm starts landing on the minimizer of a
    // data-free problem still count as converged
    double problem_scale = f_scale;
    {
        GridFunction raw(f.dim, f.m, f.band_width);
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (raw.mask[i] != NodeMask::Interior) raw.values[i] = boundary(raw.node(i));
        gradient_kernel(raw, f, p, config.epsilon_schedule.front(), w, grad);
        problem_scale = std::max(problem_scale, l2(grad));
    }

    for (double eps : config.epsilon_schedule) {
        StageRecord stage;
        stage.epsilon = eps;
        stage.history_begin = report.energy_history.size();

        double energy = energy_kernel(u, f, p, eps, w);
        report.energy_history.push_back(energy);
        gradient_kernel(u, f, p, eps, w, grad);
        double gnorm = l2(grad);
        const double stage_scale = std::max(gnorm, problem_scale) + 1e-300;
        bool have_prev = false;
        double prev_step = 0.0;

        int it = 0;
        for (; it < config.max_iters; ++it) {
            if (gnorm <= config.grad_tol * stage_scale) break;

            double step;
            if (have_prev) {
                // Barzilai-Borwein trial step from the last accepted move
                double sy = 0.0, ss = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double s = -prev_step * prev_grad[i];
                    const double y = grad[i] - prev_grad[i];
                    sy += s * y;
                    ss += s * s;
                }
                step = sy > 0.0 ? ss / sy : prev_step * 2.0;
            } else {
                step = u.h / gnorm;  // first move of size ~h; Armijo trims it
            }

            const double gsq = gnorm * gnorm;
            double new_energy = 0.0;
            bool ok = false;
            for (int bt = 0; bt < config.line_search.max_backtracks; ++bt) {
                for (std::size_t i = 0; i < u.size(); ++i)
                    trial.values[i] = u.values[i] - step * grad[i];
                new_energy = energy_kernel(trial, f, p, eps, w);
                if (new_energy <=
                    energy - config.line_search.sufficient_decrease * step * gsq) {
                    ok = true;
                    break;
                }
                step *= config.line_search.shrink;
            }
            if (!ok) break;  // step underflowed against the curvature

            std::swap(u.values, trial.values);
            energy = new_energy;
            report.energy_history.push_back(energy);
            std::swap(prev_grad, grad);
            prev_step = step;
            have_prev = true;
            gradient_kernel(u, f, p, eps, w, grad);
            gnorm = l2(grad);
        }

        stage.iterations = it;
        stage.grad_norm = gnorm;
        stage.grad_norm_rel = gnorm / stage_scale;
        stage.converged = gnorm <= config.grad_tol * stage_scale;
        report.stages.push_back(stage);
        report.iterations += it;
    }

    report.solution = std::move(u);
    report.final_grad_norm = report.stages.back().grad_norm;
    report.converged = report.stages.back().converged;
    return report;
}

void write_solve_summary(const SolveReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[160];
    out << "iterations=" << report.iterations << "\n";
    std::snprintf(buf, sizeof buf, "final_grad_norm=%.17g\n", report.final_grad_norm);
    out << buf;
    out << "converged=" << (report.converged ? 1 : 0) << "\n";
    std::snprintf(buf, sizeof buf, "final_energy=%.17g\n",
                  report.energy_history.empty() ? 0.0 : report.energy_history.back());
    out << buf;
    out << "stages=" << report.stages.size() << "\n";
    for (std::size_t s = 0; s < report.stages.size(); ++s) {
        const auto& st = report.stages[s];
        std::snprintf(buf, sizeof buf,
                      "stage.%zu=eps:%.3g iters:%d grad:%.6g rel:%.6g converged:%d\n", s,
                      st.epsilon, st.iterations, st.grad_norm, st.grad_norm_rel,
                      st.converged ? 1 : 0);
        out << buf;
    }
}

}  // namespace plab
