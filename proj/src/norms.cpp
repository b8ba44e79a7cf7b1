#include "plab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace plab {

double ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

SampleCloud sample_unit_ball(int dim, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("sample_unit_ball: count >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    SampleCloud cloud;
    cloud.dim = dim;
    cloud.points.resize(count * dim);
    cloud.values.assign(count, 0.0);
    cloud.weight = ball_volume(dim) / static_cast<double>(count);
    for (std::size_t s = 0; s < count; ++s) {
        double norm_sq = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double g = gauss(rng);
            cloud.points[s * dim + d] = g;
            norm_sq += g * g;
        }
        const double r = std::pow(unif(rng), 1.0 / dim) / std::sqrt(std::max(norm_sq, 1e-300));
        for (int d = 0; d < dim; ++d) cloud.points[s * dim + d] *= r;
    }
    return cloud;
}

double weak_lebesgue_norm(std::span<const double> values, double weight, double q) {
    if (values.empty()) throw std::invalid_argument("weak_lebesgue_norm: empty input");
    if (!(q > 0)) throw std::invalid_argument("weak_lebesgue_norm: need q > 0");
    std::vector<double> mags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    // The raw empirical sup is dominated by the noise of the extreme order
    // statistics (relative fluctuation ~ k^{-1/2}); for large samples the sup
    // is taken over k >= N^{2/3}, which pins singular-power norms to ~1%.
    const std::size_t n = mags.size();
    std::size_t k_min = 1;
    if (n >= 1024)
        k_min = static_cast<std::size_t>(std::cbrt(static_cast<double>(n) * n));
    double best = 0.0;
    for (std::size_t k = k_min; k <= n; ++k)
        best = std::max(best, mags[k - 1] * std::pow(static_cast<double>(k) * weight, 1.0 / q));
    return best;
}

double weak_lebesgue_norm(const SampleCloud& f, double q) {
    return weak_lebesgue_norm(std::span<const double>(f.values), f.weight, q);
}

namespace {

std::vector<double> ball_restricted_values(const GridFunction& f) {
    std::vector<double> vals;
    vals.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.mask[i] != NodeMask::Exterior) vals.push_back(f.values[i]);
    return vals;
}

}  // namespace

double weak_lebesgue_norm(const GridFunction& f, double q) {
    const auto vals = ball_restricted_values(f);
    return weak_lebesgue_norm(std::span<const double>(vals), std::pow(f.h, f.dim), q);
}

double lebesgue_norm(std::span<const double> values, double weight, double q) {
    if (values.empty()) throw std::invalid_argument("lebesgue_norm: empty input");
    if (!(q > 0)) throw std::invalid_argument("lebesgue_norm: need q > 0");
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v), q);
    return std::pow(acc * weight, 1.0 / q);
}

double lebesgue_norm(const SampleCloud& f, double q) {
    return lebesgue_norm(std::span<const double>(f.values), f.weight, q);
}

double lebesgue_norm(const GridFunction& f, double q) {
    const auto vals = ball_restricted_values(f);
    return lebesgue_norm(std::span<const double>(vals), std::pow(f.h, f.dim), q);
}

namespace {

// visit non-exterior nodes inside the ball
template <class Fn>
void for_ball_nodes(const GridFunction& u, const BallSpec& ball, Fn&& fn) {
    const double r2 = ball.radius * ball.radius;
    int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int d = 0; d < u.dim; ++d) {
        lo[d] = std::max(0, static_cast<int>(std::ceil((ball.center[d] - ball.radius + 1) / u.h)));
        hi[d] = std::min(u.m - 1,
                         static_cast<int>(std::floor((ball.center[d] + ball.radius + 1) / u.h)));
    }
    const int kmax = u.dim == 3 ? hi[2] : 0;
    const int kmin = u.dim == 3 ? lo[2] : 0;
    for (int k = kmin; k <= kmax; ++k) {
        const double dz = u.dim == 3 ? u.coord(k) - ball.center[2] : 0.0;
        for (int j = lo[1]; j <= hi[1]; ++j) {
            const double dy = u.coord(j) - ball.center[1];
            for (int i = lo[0]; i <= hi[0]; ++i) {
                const double dx = u.coord(i) - ball.center[0];
                if (dx * dx + dy * dy + dz * dz > r2) continue;
                const std::size_t idx = u.index(i, j, k);
                if (u.mask[idx] == NodeMask::Exterior) continue;
                fn(idx);
            }
        }
    }
}

}  // namespace

std::size_t nodes_in_ball(const GridFunction& u, const BallSpec& ball) {
    std::size_t n = 0;
    for_ball_nodes(u, ball, [&](std::size_t) { ++n; });
    return n;
}

double ball_average(const GridFunction& u, const BallSpec& ball) {
    double sum = 0.0;
    std::size_t n = 0;
    for_ball_nodes(u, ball, [&](std::size_t idx) {
        sum += u.values[idx];
        ++n;
    });
    if (n == 0) throw std::invalid_argument("ball_average: ball contains no grid nodes");
    return sum / static_cast<double>(n);
}

double mean_oscillation(const GridFunction& u, const BallSpec& ball, double exponent) {
    if (!(exponent >= 1.0)) throw std::invalid_argument("mean_oscillation: exponent >= 1");
    const double mean = ball_average(u, ball);
    double acc = 0.0;
    std::size_t n = 0;
    for_ball_nodes(u, ball, [&](std::size_t idx) {
        acc += std::pow(std::abs(u.values[idx] - mean), exponent);
        ++n;
    });
    return std::pow(acc / static_cast<double>(n), 1.0 / exponent);
}

std::vector<BallSpec> dyadic_ball_family(const GridFunction& u, int min_nodes) {
    std::vector<BallSpec> family;
    for (int j = 1;; ++j) {
        const double radius = std::pow(0.5, j);
        if (nodes_in_ball(u, {{0.0, 0.0, 0.0}, radius}) < static_cast<std::size_t>(min_nodes))
            break;
        for (int a = -2; a <= 2; ++a)
            for (int b = -2; b <= 2; ++b) {
                if (u.dim == 2) {
                    const Point c{0.25 * a, 0.25 * b, 0.0};
                    if (norm2(c) <= 0.5 + 1e-12) family.push_back({c, radius});
                } else {
                    for (int cc = -2; cc <= 2; ++cc) {
                        const Point c{0.25 * a, 0.25 * b, 0.25 * cc};
                        if (norm2(c) <= 0.5 + 1e-12) family.push_back({c, radius});
                    }
                }
            }
        if (j >= 30) break;
    }
    return family;
}

double bmo_seminorm(const GridFunction& u, std::span<const BallSpec> family) {
    if (family.empty()) throw std::invalid_argument("bmo_seminorm: empty ball family");
    double best = 0.0;
    for (const auto& ball : family) best = std::max(best, mean_oscillation(u, ball, 1.0));
    return best;
}

double bmo_seminorm(const GridFunction& u) {
    const auto family = dyadic_ball_family(u);
    return bmo_seminorm(u, family);
}

JNMoment john_nirenberg_moment(const GridFunction& u, const BallSpec& ball, double alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("john_nirenberg_moment: alpha > 0");
    const double mean = ball_average(u, ball);
    double acc = 0.0;
    std::size_t n = 0;
    for_ball_nodes(u, ball, [&](std::size_t idx) {
        acc += std::exp(alpha * std::abs(u.values[idx] - mean));
        ++n;
    });
    JNMoment m;
    m.value = acc / static_cast<double>(n);
    m.overflowed = !std::isfinite(m.value);
    if (m.overflowed) m.value = std::numeric_limits<double>::infinity();
    return m;
}

}  // namespace plab
