#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// Point samples of a function on B_1; `weight` is the measure represented by
/// one sample (|B_1|/N for uniform sampling).
struct SampleCloud {
    int dim = 2;
    std::vector<double> points;  // flattened, dim per sample
    std::vector<double> values;
    double weight = 0.0;
};

struct BallSpec {
    Point center{0.0, 0.0, 0.0};
    double radius = 0.5;
};

double ball_volume(int n);

/// Uniform samples of B_1 (values zero-initialized).
SampleCloud sample_unit_ball(int dim, std::size_t count, std::uint64_t seed);

/// Order-statistic estimator of the weak-L^q norm: with |v|_(1) >= |v|_(2) >= ...,
/// sup_k |v|_(k) (k*weight)^{1/q}. On samples of size >= 1024 the sup skips
/// k < N^{2/3}, where extreme-order-statistic noise swamps the level-set law.
double weak_lebesgue_norm(std::span<const double> values, double weight, double q);
double weak_lebesgue_norm(const SampleCloud& f, double q);
double weak_lebesgue_norm(const GridFunction& f, double q);  // non-exterior nodes, weight h^dim

double lebesgue_norm(std::span<const double> values, double weight, double q);
double lebesgue_norm(const SampleCloud& f, double q);
double lebesgue_norm(const GridFunction& f, double q);

std::size_t nodes_in_ball(const GridFunction& u, const BallSpec& ball);
double ball_average(const GridFunction& u, const BallSpec& ball);

/// (avg over nodes in the ball of |u - avg(u)|^exponent)^{1/exponent};
/// exterior nodes contribute nothing.
double mean_oscillation(const GridFunction& u, const BallSpec& ball, double exponent);

/// Dyadic surrogate for the BMO ball family: centers on a 5^dim lattice over
/// B_{1/2}, radii 2^{-j}, j = 1..J with J limited so each ball holds at least
/// min_nodes nodes.
std::vector<BallSpec> dyadic_ball_family(const GridFunction& u, int min_nodes = 100);

/// max over the family of mean_oscillation(u, ball, 1).
double bmo_seminorm(const GridFunction& u, std::span<const BallSpec> family);
double bmo_seminorm(const GridFunction& u);  // default dyadic family

struct JNMoment {
    double value = 1.0;
    bool overflowed = false;  // value is +inf: alpha too large for this u
};

/// Node average of exp(alpha |u - avg(u)|) over the ball.
JNMoment john_nirenberg_moment(const GridFunction& u, const BallSpec& ball, double alpha);

}  // namespace plab
