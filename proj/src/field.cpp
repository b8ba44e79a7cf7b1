#include "plab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plab {

namespace {

int cell_parity(std::span<const double> X, double cell) {
    int parity = 0;
    for (double x : X) parity += static_cast<int>(std::floor((x + 1.0) / cell));
    return parity & 1;
}

double bilinear(const GridFunction& t, std::span<const double> X) {
    // clamped multilinear interpolation on the coefficient table
    const int m = t.m;
    double loc[3] = {0.0, 0.0, 0.0};
    int base[3] = {0, 0, 0};
    for (int d = 0; d < t.dim; ++d) {
        double s = (std::clamp(X[d], -1.0, 1.0) + 1.0) / t.h;
        int i = std::min(static_cast<int>(s), m - 2);
        base[d] = i;
        loc[d] = s - i;
    }
    if (t.dim == 2) {
        const double v00 = t.values[t.index(base[0], base[1])];
        const double v10 = t.values[t.index(base[0] + 1, base[1])];
        const double v01 = t.values[t.index(base[0], base[1] + 1)];
        const double v11 = t.values[t.index(base[0] + 1, base[1] + 1)];
        return (1 - loc[0]) * (1 - loc[1]) * v00 + loc[0] * (1 - loc[1]) * v10 +
               (1 - loc[0]) * loc[1] * v01 + loc[0] * loc[1] * v11;
    }
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        double wgt = 1.0;
        int ijk[3];
        for (int d = 0; d < 3; ++d) {
            const int bit = (c >> d) & 1;
            ijk[d] = base[d] + bit;
            wgt *= bit ? loc[d] : 1 - loc[d];
        }
        acc += wgt * t.values[t.index(ijk[0], ijk[1], ijk[2])];
    }
    return acc;
}

}  // namespace

CoefficientField CoefficientField::constant(double w) {
    if (!(w > 0)) throw std::invalid_argument("coefficient: constant weight must be positive");
    CoefficientField c;
    c.kind_ = Kind::Constant;
    c.w_ = c.lo_ = c.hi_ = w;
    c.name_ = "constant";
    return c;
}

CoefficientField CoefficientField::checkerboard(double lo, double hi, double cell) {
    if (!(0 < lo && lo <= hi)) throw std::invalid_argument("coefficient: need 0 < lo <= hi");
    if (!(cell > 0 && cell <= 2.0)) throw std::invalid_argument("coefficient: bad cell size");
    CoefficientField c;
    c.kind_ = Kind::Checkerboard;
    c.lo_ = lo;
    c.hi_ = hi;
    c.cell_ = cell;
    c.name_ = "checkerboard";
    return c;
}

CoefficientField CoefficientField::smooth(std::string name,
                                          std::function<double(std::span<const double>)> fn,
                                          double lo, double hi) {
    if (!(0 < lo && lo <= hi)) throw std::invalid_argument("coefficient: need 0 < lo <= hi");
    CoefficientField c;
    c.kind_ = Kind::Smooth;
    c.scalar_fn_ = std::move(fn);
    c.lo_ = lo;
    c.hi_ = hi;
    c.name_ = std::move(name);
    return c;
}

CoefficientField CoefficientField::tabulated(GridFunction samples) {
    CoefficientField c;
    c.kind_ = Kind::Tabulated;
    double lo = samples.values.front(), hi = lo;
    for (double v : samples.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 0)) throw std::invalid_argument("coefficient: tabulated weight must be positive");
    c.lo_ = lo;
    c.hi_ = hi;
    c.table_ = std::move(samples);
    c.name_ = "tabulated";
    return c;
}

CoefficientField CoefficientField::constant_matrix(int dim, std::vector<double> row_major) {
    if (row_major.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("coefficient: matrix size mismatch");
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(row_major[i * dim + j] - row_major[j * dim + i]) > 1e-14)
                throw std::invalid_argument("coefficient: matrix must be symmetric");
    CoefficientField c;
    c.kind_ = Kind::ConstantMatrix;
    c.matrix_ = std::move(row_major);
    c.matrix_dim_ = dim;
    // Gershgorin bracket for the declared eigenvalue bounds
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < dim; ++i) {
        double off = 0.0;
        for (int j = 0; j < dim; ++j)
            if (j != i) off += std::abs(c.matrix_[i * dim + j]);
        lo = std::min(lo, c.matrix_[i * dim + i] - off);
        hi = std::max(hi, c.matrix_[i * dim + i] + off);
    }
    if (!(lo > 0)) throw std::invalid_argument("coefficient: matrix not positive definite");
    c.lo_ = lo;
    c.hi_ = hi;
    c.name_ = "constant-matrix";
    return c;
}

CoefficientField CoefficientField::smooth_matrix(
    std::string name, std::function<void(std::span<const double>, std::span<double>)> fn, int dim,
    double lo, double hi) {
    if (!(0 < lo && lo <= hi)) throw std::invalid_argument("coefficient: need 0 < lo <= hi");
    CoefficientField c;
    c.kind_ = Kind::SmoothMatrix;
    c.matrix_fn_ = std::move(fn);
    c.matrix_dim_ = dim;
    c.lo_ = lo;
    c.hi_ = hi;
    c.name_ = std::move(name);
    return c;
}

double CoefficientField::scalar_at(std::span<const double> X) const {
    switch (kind_) {
        case Kind::Constant: return w_;
        case Kind::Checkerboard: return cell_parity(X, cell_) ? hi_ : lo_;
        case Kind::Smooth: return scalar_fn_(X);
        case Kind::Tabulated: return bilinear(table_, X);
        default: throw std::logic_error("coefficient: scalar_at on a matrix field");
    }
}

void CoefficientField::matrix_at(std::span<const double> X, std::span<double> out) const {
    const int n = static_cast<int>(std::sqrt(static_cast<double>(out.size())) + 0.5);
    if (is_matrix()) {
        if (n != matrix_dim_) throw std::invalid_argument("coefficient: matrix dim mismatch");
        if (kind_ == Kind::ConstantMatrix)
            std::copy(matrix_.begin(), matrix_.end(), out.begin());
        else
            matrix_fn_(X, out);
        return;
    }
    const double w = scalar_at(X);
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < n; ++i) out[i * n + i] = w;
}

FieldSpec::FieldSpec(double p_, int dim_, CoefficientField coeff_, double lo, double hi,
                     bool formal_)
    : p(p_), dim(dim_), coeff(std::move(coeff_)), lambda_lo(lo), lambda_hi(hi), formal(formal_) {
    if (!(p > 1.0)) throw std::invalid_argument("FieldSpec: need p > 1");
    if (!formal && !(p < dim))
        throw std::invalid_argument("FieldSpec: need p < dim (or construct a formal spec)");
    if (dim < 2) throw std::invalid_argument("FieldSpec: need dim >= 2");
    if (!(0 < lambda_lo && lambda_lo <= lambda_hi))
        throw std::invalid_argument("FieldSpec: need 0 < lambda <= Lambda");
    if (coeff.matrix_dim() != 0 && coeff.matrix_dim() != dim)
        throw std::invalid_argument("FieldSpec: coefficient dimension mismatch");
}

std::pair<double, double> sharp_ellipticity(double p, double w_lo, double w_hi) {
    return {w_lo * std::min(1.0, p - 1.0), w_hi * std::max(1.0, p - 1.0)};
}

FieldSpec make_field(double p, int dim, CoefficientField coeff, bool formal) {
    auto [lo, hi] = sharp_ellipticity(p, coeff.lo(), coeff.hi());
    return FieldSpec(p, dim, std::move(coeff), lo, hi, formal);
}

void evaluate_field(const FieldSpec& spec, std::span<const double> X, std::span<const double> xi,
                    std::span<double> out) {
    const int n = spec.dim;
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) norm_sq += xi[i] * xi[i];
    if (norm_sq == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double scale = std::pow(norm_sq, 0.5 * (spec.p - 2.0));
    if (spec.coeff.is_matrix()) {
        std::vector<double> A(static_cast<std::size_t>(n) * n);
        spec.coeff.matrix_at(X, A);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += A[i * n + j] * xi[j];
            out[i] = scale * acc;
        }
        return;
    }
    const double w = spec.coeff.scalar_at(X);
    for (int i = 0; i < n; ++i) out[i] = w * scale * xi[i];
}

std::vector<double> evaluate_field(const FieldSpec& spec, const std::vector<double>& X,
                                   const std::vector<double>& xi) {
    std::vector<double> out(spec.dim);
    evaluate_field(spec, X, xi, out);
    return out;
}

namespace {

std::vector<double> random_in_ball(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    std::vector<double> x(n);
    double norm_sq = 0.0;
    for (auto& v : x) {
        v = gauss(rng);
        norm_sq += v * v;
    }
    const double r = std::pow(unif(rng), 1.0 / n) / std::sqrt(std::max(norm_sq, 1e-300));
    for (auto& v : x) v *= r;
    return x;
}

std::vector<double> random_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    double norm_sq = 0.0;
    for (auto& v : x) {
        v = gauss(rng);
        norm_sq += v * v;
    }
    const double inv = 1.0 / std::sqrt(std::max(norm_sq, 1e-300));
    for (auto& v : x) v *= inv;
    return x;
}

}  // namespace

StructureAuditReport audit_structure(const FieldSpec& spec, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("audit_structure: sample_count >= 1");
    const int n = spec.dim;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif;

    StructureAuditReport rep;
    rep.samples = sample_count;

    std::vector<double> a(n), ap(n), am(n), xi(n), shifted(n);
    for (int s = 0; s < sample_count; ++s) {
        const auto X = random_in_ball(rng, n);
        // log-uniform magnitudes; the homogeneity invariant covers the origin
        const double mag = std::pow(10.0, -3.0 + 6.0 * unif(rng));
        auto dir = random_direction(rng, n);
        for (int i = 0; i < n; ++i) xi[i] = mag * dir[i];
        const auto d = random_direction(rng, n);

        double xi_norm = mag;
        if (xi_norm < rep.xi_floor) {
            ++rep.flagged;
            continue;
        }
        evaluate_field(spec, X, xi, a);
        double a_norm = 0.0;
        for (double v : a) a_norm += v * v;
        a_norm = std::sqrt(a_norm);
        const double growth_bound = spec.lambda_hi * std::pow(xi_norm, spec.p - 1.0);
        rep.growth_ratio = std::max(rep.growth_ratio, a_norm / growth_bound);

        // directional derivative of a at xi along d, by central differences
        const double step = 1e-5 * std::max(xi_norm, 1.0);
        for (int i = 0; i < n; ++i) shifted[i] = xi[i] + step * d[i];
        evaluate_field(spec, X, shifted, ap);
        for (int i = 0; i < n; ++i) shifted[i] = xi[i] - step * d[i];
        evaluate_field(spec, X, shifted, am);
        double deriv_norm_sq = 0.0, quad_form = 0.0;
        for (int i = 0; i < n; ++i) {
            const double di = (ap[i] - am[i]) / (2.0 * step);
            deriv_norm_sq += di * di;
            quad_form += di * d[i];
        }
        const double jac_scale = std::pow(xi_norm, spec.p - 2.0);
        rep.jacobian_ratio =
            std::max(rep.jacobian_ratio, std::sqrt(deriv_norm_sq) / (spec.lambda_hi * jac_scale));
        rep.monotonicity_ratio =
            std::min(rep.monotonicity_ratio, quad_form / (spec.lambda_lo * jac_scale));
    }
    rep.growth_ok = rep.growth_ratio <= 1.0 + rep.tolerance &&
                    rep.jacobian_ratio <= 1.0 + rep.tolerance;
    rep.monotonicity_ok = rep.monotonicity_ratio >= 1.0 - rep.tolerance;
    return rep;
}

std::vector<std::pair<double, double>> continuity_modulus(const FieldSpec& spec,
                                                          std::vector<double> radii,
                                                          int samples_per_radius,
                                                          std::uint64_t seed) {
    for (double rho : radii)
        if (!(rho > 0 && rho < 1))
            throw std::invalid_argument("continuity_modulus: radii must lie in (0,1)");
    std::sort(radii.begin(), radii.end());
    std::mt19937_64 rng(seed);
    const int n = spec.dim;

    std::vector<std::pair<double, double>> out;
    out.reserve(radii.size());
    std::vector<double> aX(n), aY(n), xi(n), Y(n);
    for (double rho : radii) {
        double sup = 0.0;
        for (int s = 0; s < samples_per_radius; ++s) {
            auto X = random_in_ball(rng, n);
            for (auto& v : X) v *= 1.0 - rho;  // keep Y inside B_1
            const auto dir = random_direction(rng, n);
            for (int i = 0; i < n; ++i) Y[i] = X[i] + rho * dir[i];
            const auto xdir = random_direction(rng, n);
            for (int i = 0; i < n; ++i) xi[i] = xdir[i];
            evaluate_field(spec, X, xi, aX);
            evaluate_field(spec, Y, xi, aY);
            double diff = 0.0;
            for (int i = 0; i < n; ++i) diff += (aX[i] - aY[i]) * (aX[i] - aY[i]);
            sup = std::max(sup, std::sqrt(diff));  // |xi| = 1, so the normalizer is 1
        }
        out.emplace_back(rho, sup);
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i].second = std::max(out[i].second, out[i - 1].second);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string field_to_config(const FieldSpec& spec) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "p=%.17g\n", spec.p);
    out += buf;
    std::snprintf(buf, sizeof buf, "dim=%d\n", spec.dim);
    out += buf;
    switch (spec.coeff.kind()) {
        case CoefficientField::Kind::Constant:
            std::snprintf(buf, sizeof buf, "coeff.kind=constant\ncoeff.params=%.17g\n",
                          spec.coeff.lo());
            break;
        case CoefficientField::Kind::Checkerboard:
            std::snprintf(buf, sizeof buf,
                          "coeff.kind=checkerboard\ncoeff.params=%.17g,%.17g,%.17g\n",
                          spec.coeff.lo(), spec.coeff.hi(), spec.coeff.cell());
            break;
        case CoefficientField::Kind::Smooth:
            std::snprintf(buf, sizeof buf, "coeff.kind=smooth\ncoeff.params=%s\n",
                          spec.coeff.name().c_str());
            break;
        default:
            throw std::invalid_argument("field_to_config: only scalar built-in coefficients "
                                        "serialize");
    }
    out += buf;
    std::snprintf(buf, sizeof buf, "lambda_lo=%.17g\nlambda_hi=%.17g\n", spec.lambda_lo,
                  spec.lambda_hi);
    out += buf;
    if (spec.formal) out += "formal=1\n";
    return out;
}

CoefficientField named_smooth_coefficient(const std::string& name) {
    if (name == "radial-linear")
        return CoefficientField::smooth(
            "radial-linear",
            [](std::span<const double> X) {
                double r2 = 0.0;
                for (double x : X) r2 += x * x;
                return 1.0 + std::sqrt(r2);
            },
            1.0, 1.0 + std::sqrt(3.0));
    if (name == "radial-quadratic")
        return CoefficientField::smooth(
            "radial-quadratic",
            [](std::span<const double> X) {
                double r2 = 0.0;
                for (double x : X) r2 += x * x;
                return 1.0 + 0.5 * r2;
            },
            1.0, 2.5);
    throw std::invalid_argument("unknown smooth coefficient: " + name);
}

FieldSpec field_from_config(const std::string& text) {
    double p = 0.0, lo = 0.0, hi = 0.0;
    int dim = 0;
    bool formal = false;
    std::string kind = "constant", params = "1";
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "p") p = std::stod(val);
        else if (key == "dim") dim = std::stoi(val);
        else if (key == "coeff.kind") kind = val;
        else if (key == "coeff.params") params = val;
        else if (key == "lambda_lo") lo = std::stod(val);
        else if (key == "lambda_hi") hi = std::stod(val);
        else if (key == "formal") formal = val == "1" || val == "true";
    }
    std::vector<double> nums;
    {
        std::istringstream ps(params);
        std::string tok;
        while (std::getline(ps, tok, ','))
            if (!trim(tok).empty() && kind != "smooth") nums.push_back(std::stod(tok));
    }
    CoefficientField coeff = CoefficientField::constant(1.0);
    if (kind == "constant") {
        coeff = CoefficientField::constant(nums.empty() ? 1.0 : nums[0]);
    } else if (kind == "checkerboard") {
        if (nums.size() < 2) throw std::invalid_argument("checkerboard needs lo,hi[,cell]");
        coeff = CoefficientField::checkerboard(nums[0], nums[1],
                                               nums.size() > 2 ? nums[2] : 0.125);
    } else if (kind == "smooth") {
        coeff = named_smooth_coefficient(trim(params));
    } else if (kind == "tabulated") {
        coeff = CoefficientField::tabulated(read_grid_csv(trim(params)));
    } else {
        throw std::invalid_argument("unknown coeff.kind: " + kind);
    }
    if (lo == 0.0 && hi == 0.0) return make_field(p, dim, std::move(coeff), formal);
    return FieldSpec(p, dim, std::move(coeff), lo, hi, formal);
}

}  // namespace plab
