#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plab/field.hpp"
#include "plab/grid.hpp"
#include "plab/norms.hpp"
#include "plab/radial.hpp"
#include "plab/solver.hpp"

namespace plab {

struct DecayLevel {
    int k = 0;
    double radius = 0.0;
    double c_k = 0.0;    // ball average
    double osc_k = 0.0;  // mean oscillation with the fitting exponent
    std::size_t nodes = 0;
    bool used = false;  // inside the fit window
};

struct DyadicDecayReport {
    Point center{0.0, 0.0, 0.0};
    double lambda = 0.5;
    double exponent = 2.0;  // oscillation exponent (p)
    std::vector<DecayLevel> levels;
    double fitted_alpha = 0.0;
    double fit_residual = 0.0;
    bool degenerate = false;  // all usable oscillations vanished; alpha = +inf
};

/// Ball averages and mean oscillations over radii lambda^k, and the least
/// squares slope of log(osc_k) against k*log(lambda). The fit drops levels
/// whose ball holds fewer than min_nodes nodes or touches the Dirichlet band.
DyadicDecayReport dyadic_decay(const GridFunction& u, const Point& center, double lambda, double p,
                               int max_levels, int min_nodes = 100);

struct HolderFit {
    double alpha = 0.0;  // min over centers
    bool degenerate = false;
    std::vector<DyadicDecayReport> per_center;
};

HolderFit fit_holder_exponent(const GridFunction& u, const std::vector<Point>& centers,
                              double lambda, double p, int max_levels = 6, int min_nodes = 100);

/// Boundary/source rules that survive the plain-text scenario format.
struct SourceRule {
    enum class Kind { Zero, RadialPower, RadialLog };
    Kind kind = Kind::Zero;
    double amplitude = 0.0;
    double exponent = 0.0;  // f = amplitude * max(r, cap)^exponent

    static SourceRule zero() { return {}; }
    static SourceRule radial_power(double amplitude, double exponent);
    static SourceRule radial_log(double amplitude);

    GridFunction tabulate(int dim, int m, int band_width = 2) const;
    RadialProfile radial_profile(double cap) const;
};

struct BoundaryData {
    enum class Kind { Constant, RadialPower };
    Kind kind = Kind::Constant;
    double value = 0.0;  // constant, or amplitude of r^beta
    double beta = 0.0;

    static BoundaryData constant(double v);
    static BoundaryData radial_power(double amplitude, double beta);
    BoundaryRule rule() const;
};

struct DiagnosticsConfig {
    double lambda = 0.5;
    int max_levels = 6;
    int min_nodes = 100;
    double fit_tolerance = 0.05;           // |fitted - predicted| verdict budget
    std::vector<Point> centers;            // empty: origin plus the fit lattice
    double bmo_stability_threshold = 0.10; // relative seminorm change across resolutions
    double sup_growth_threshold = 0.20;    // relative max|u| growth across resolutions
};

/// A named experiment: a field, a source, a solver configuration, and the
/// theorem-predicted exponent (or the BMO borderline when theta is absent).
struct Scenario {
    std::string name;
    FieldSpec field;
    SourceRule source;
    BoundaryData boundary;
    std::optional<double> theta;  // in (1, p); absent = borderline BMO case
    double alpha0 = 1.0;          // surrogate used in min{., alpha0}
    bool measure_alpha0 = false;  // measure the surrogate from homogeneous solves
    SolveConfig solver;
    DiagnosticsConfig diagnostics;
    int resolution = 129;  // coarse grid; the refined companion is 2m-1
    std::uint64_t seed = 12345;

    /// min{p/(p-1) * (theta-1)/theta, alpha0} when theta is set.
    std::optional<double> predicted_alpha() const;
};

struct NormRow {
    std::string quantity;
    std::string parameters;
    double value = 0.0;
    int resolution = 0;
    double cap = 0.0;
};

struct ScenarioVerdict {
    std::optional<double> predicted_alpha;
    double fitted_alpha = 0.0;
    double fit_residual = 0.0;
    bool exponent_within_tolerance = false;
    double bmo_change = 0.0;   // relative seminorm change coarse -> fine
    double sup_growth = 0.0;   // relative max|u| growth coarse -> fine
    bool bmo_stable = false;
    bool sup_growing = false;
    bool solver_converged = true;
    std::string summary;  // e.g. "BMO-stable, sup-growing"
};

struct ScenarioReport {
    std::string name;
    double p = 0.0;
    std::optional<double> theta;
    double alpha0 = 1.0;
    int resolution_coarse = 0;
    int resolution_fine = 0;
    double cap_coarse = 0.0, cap_fine = 0.0;
    SolveReport solve_coarse;
    SolveReport solve_fine;
    std::vector<DyadicDecayReport> decay;  // on the fine solution
    std::vector<NormRow> norm_table;
    double bmo_coarse = 0.0, bmo_fine = 0.0;
    double sup_coarse = 0.0, sup_fine = 0.0;
    ScenarioVerdict verdict;
};

ScenarioReport run_scenario(const Scenario& s);

/// Decay exponent of solutions to the homogeneous equation with random
/// oscillatory boundary data: the measured stand-in for the optimal exponent
/// of a-harmonic functions, capped at 1.
double estimate_alpha0(const FieldSpec& field, int boundary_samples, const SolveConfig& config,
                       int resolution = 65, std::uint64_t seed = 12345);

struct ScalingRow {
    int level = 0;
    double factor = 0.0;  // lambda^{m [p - (p-1) alpha]}
    double weak_norm = 0.0;
};

struct ScalingLawReport {
    double p = 0.0, theta = 0.0, alpha = 0.0, lambda = 0.5;
    double q = 0.0;  // theta * dim / p
    std::vector<ScalingRow> rows;  // level 0 = the unscaled source
    bool nonincreasing = true;
};

/// Tabulates the weak-L^{theta n/p} norms of the rescaled sources
/// f_m(X) = lambda^{m [p-(p-1) alpha]} f(lambda^m X) on the grid.
ScalingLawReport check_scaling_law(const SourceRule& f, int dim, int resolution, double p,
                                   double theta, double alpha, double lambda, int levels);

// Report serialization (ScenarioReport as a directory of CSV/plain text).
void write_scenario_report(const ScenarioReport& report, const std::string& directory,
                           bool with_timestamp = true);
void write_norm_table_csv(const std::vector<NormRow>& rows, const std::string& path);
void write_decay_csv(const DyadicDecayReport& report, const std::string& path);
void write_scaling_csv(const ScalingLawReport& report, const std::string& path);

}  // namespace plab
