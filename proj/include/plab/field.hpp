#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// Coefficient of the vector field a(X,xi): a scalar weight w(X) or a
/// symmetric matrix A(X), deterministic and bounded on the cube [-1,1]^dim.
class CoefficientField {
  public:
    enum class Kind { Constant, Checkerboard, Smooth, Tabulated, ConstantMatrix, SmoothMatrix };

    static CoefficientField constant(double w);
    static CoefficientField checkerboard(double lo, double hi, double cell = 0.125);
    static CoefficientField smooth(std::string name,
                                   std::function<double(std::span<const double>)> fn, double lo,
                                   double hi);
    static CoefficientField tabulated(GridFunction samples);
    static CoefficientField constant_matrix(int dim, std::vector<double> row_major);
    static CoefficientField smooth_matrix(
        std::string name, std::function<void(std::span<const double>, std::span<double>)> fn,
        int dim, double lo, double hi);

    Kind kind() const { return kind_; }
    bool is_matrix() const { return kind_ == Kind::ConstantMatrix || kind_ == Kind::SmoothMatrix; }
    /// Matrix kinds are pinned to one dimension; scalar kinds work in any (0 = any).
    int matrix_dim() const { return matrix_dim_; }

    double scalar_at(std::span<const double> X) const;
    void matrix_at(std::span<const double> X, std::span<double> out) const;

    /// Declared coefficient bounds: lo <= w(X) <= hi (or eigenvalue bounds).
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double cell() const { return cell_; }
    const std::string& name() const { return name_; }

  private:
    CoefficientField() = default;
    Kind kind_ = Kind::Constant;
    double w_ = 1.0;
    double lo_ = 1.0, hi_ = 1.0;
    double cell_ = 0.125;
    int matrix_dim_ = 0;
    std::string name_ = "constant";
    std::function<double(std::span<const double>)> scalar_fn_;
    std::function<void(std::span<const double>, std::span<double>)> matrix_fn_;
    std::vector<double> matrix_;
    GridFunction table_;
};

/// Admissible degenerate vector field a(X,xi) = w(X)|xi|^{p-2} xi
/// (or A(X)|xi|^{p-2} xi). By default the exponent must satisfy 1 < p < dim;
/// `formal` lifts the upper restriction for studies that treat the dimension
/// as a free parameter.
struct FieldSpec {
    double p;
    int dim;
    CoefficientField coeff;
    double lambda_lo;
    double lambda_hi;
    bool formal = false;

    FieldSpec(double p, int dim, CoefficientField coeff, double lambda_lo, double lambda_hi,
              bool formal = false);
};

/// Ellipticity constants that make the structural audit of the weighted
/// p-Laplacian sharp: the Jacobian of |xi|^{p-2} xi has eigenvalues
/// {1, p-1} * |xi|^{p-2}.
std::pair<double, double> sharp_ellipticity(double p, double w_lo, double w_hi);

/// FieldSpec with audit-sharp (lambda, Lambda) derived from the coefficient bounds.
FieldSpec make_field(double p, int dim, CoefficientField coeff, bool formal = false);

void evaluate_field(const FieldSpec& spec, std::span<const double> X, std::span<const double> xi,
                    std::span<double> out);
std::vector<double> evaluate_field(const FieldSpec& spec, const std::vector<double>& X,
                                   const std::vector<double>& xi);

struct StructureAuditReport {
    int samples = 0;
    int flagged = 0;      //!< |xi1| under xi_floor: finite differences unreliable, excluded
    double xi_floor = 1e-8;
    double tolerance = 1e-4;
    double growth_ratio = 0.0;    //!< worst |a(X,xi)| / (Lambda |xi|^{p-1})
    double jacobian_ratio = 0.0;  //!< worst |d_xi a(X,xi1) d| / (Lambda |xi1|^{p-2} |d|)
    double monotonicity_ratio = std::numeric_limits<double>::infinity();
    //!< worst <d_xi a(X,xi1) d, d> / (lambda |xi1|^{p-2} |d|^2); pass when >= 1
    bool growth_ok = false;
    bool monotonicity_ok = false;
    bool pass() const { return growth_ok && monotonicity_ok; }
};

/// Samples random (X, xi1, xi2) and checks the growth and monotonicity bounds
/// of the structural condition, with d_xi a evaluated by central finite
/// differences (step 1e-5 * max(|xi1|, 1)).
StructureAuditReport audit_structure(const FieldSpec& spec, int sample_count,
                                     std::uint64_t seed = 12345);

/// For each radius rho, the sampled supremum of |a(X,xi)-a(Y,xi)| / |xi|^{p-1}
/// over |X-Y| <= rho; post-processed to be nondecreasing in rho.
std::vector<std::pair<double, double>> continuity_modulus(const FieldSpec& spec,
                                                          std::vector<double> radii,
                                                          int samples_per_radius = 4096,
                                                          std::uint64_t seed = 12345);

// key=value config round trip (CLI scenario files embed these keys).
std::string field_to_config(const FieldSpec& spec);
FieldSpec field_from_config(const std::string& text);

/// Named smooth coefficients available to config files:
/// "radial-linear" (1+|X|) and "radial-quadratic" (1+|X|^2/2).
CoefficientField named_smooth_coefficient(const std::string& name);

}  // namespace plab
