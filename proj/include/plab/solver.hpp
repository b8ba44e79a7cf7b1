#pragma once

#include <functional>
#include <vector>

#include "plab/field.hpp"
#include "plab/grid.hpp"

namespace plab {

struct LineSearch {
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    int max_backtracks = 40;
};

struct SolveConfig {
    std::vector<double> epsilon_schedule{1e-1, 1e-2, 1e-3, 1e-4};
    int max_iters = 20000;   // per epsilon stage
    double grad_tol = 1e-6;  // relative to the stage's initial gradient norm
    LineSearch line_search;
    bool p2_warm_start = true;  // start from the p=2 solution of the same data
    int cg_max_iters = 4000;
    double cg_tol = 1e-12;
};

struct StageRecord {
    double epsilon = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;      // absolute l2 at exit
    double grad_norm_rel = 0.0;  // relative to the stage start
    bool converged = true;
    std::size_t history_begin = 0;  // first index of this stage in energy_history
};

struct SolveReport {
    GridFunction solution;
    std::vector<double> energy_history;  // nonincreasing within each stage
    std::vector<StageRecord> stages;
    int iterations = 0;
    double final_grad_norm = 0.0;
    bool converged = true;
};

/// Sum over cells of (1/p) w(X_cell) (|grad_h u|^2 + eps^2)^{p/2} h^dim minus
/// the load sum of f*u*h^dim over nodes, with grad_h the forward-difference
/// gradient anchored at the cell's low corner. Cells cover the whole cube;
/// minimizers solve -div(w |Du|^{p-2} Du) = f.
double discrete_energy(const GridFunction& u, const GridFunction& f, const FieldSpec& field,
                       double epsilon);

/// Exact transpose of discrete_energy: d(energy)/d(u_node) at interior nodes,
/// zero on the Dirichlet band and exterior.
GridFunction energy_gradient(const GridFunction& u, const GridFunction& f, const FieldSpec& field,
                             double epsilon);

using BoundaryRule = std::function<double(const Point&)>;

/// Weighted 5/7-point solve of the p=2 problem by conjugate gradients on the
/// discrete energy's linear gradient. Used as the solver's warm start and as
/// the linear-case reference.
GridFunction solve_p2_linear(const GridFunction& f, const FieldSpec& field,
                             const BoundaryRule& boundary, double tol = 1e-12,
                             int max_iters = 4000);

/// Energy minimization over the epsilon continuation schedule: gradient
/// descent with a Barzilai-Borwein trial step and Armijo backtracking.
/// Non-convergence (max_iters hit) is flagged, not thrown.
SolveReport solve(const GridFunction& f, const FieldSpec& field, const BoundaryRule& boundary,
                  const SolveConfig& config = {});

void write_solve_summary(const SolveReport& report, const std::string& path);

}  // namespace plab
