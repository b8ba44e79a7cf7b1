#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace plab {

using Point = std::array<double, 3>;

inline double norm2(const Point& x) {
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

enum class NodeMask : std::uint8_t {
    Interior = 0,      // |X| < 1 - band_width*h
    BoundaryBand = 1,  // 1 - band_width*h <= |X| <= 1 (Dirichlet data)
    Exterior = 2,      // |X| > 1 (cube corners; Dirichlet data, excluded from averages)
};

/// Scalar field sampled on the uniform lattice over [-1,1]^dim.
/// Node (i,j[,k]) sits at -1 + h*i with h = 2/(m-1). The mask is a pure
/// function of the node coordinates and band_width.
struct GridFunction {
    int dim = 2;  // 2 or 3
    int m = 0;    // nodes per axis
    double h = 0.0;
    int band_width = 2;
    std::vector<double> values;
    std::vector<NodeMask> mask;

    GridFunction() = default;
    GridFunction(int dim, int m, int band_width = 2);

    std::size_t size() const { return values.size(); }

    std::size_t index(int i, int j, int k = 0) const {
        return dim == 2 ? static_cast<std::size_t>(j) * m + i
                        : (static_cast<std::size_t>(k) * m + j) * m + i;
    }

    double coord(int i) const { return -1.0 + h * i; }

    Point node(std::size_t idx) const {
        if (dim == 2) {
            return {coord(static_cast<int>(idx % m)), coord(static_cast<int>(idx / m)), 0.0};
        }
        const std::size_t plane = static_cast<std::size_t>(m) * m;
        return {coord(static_cast<int>(idx % m)), coord(static_cast<int>((idx / m) % m)),
                coord(static_cast<int>(idx / plane))};
    }

    /// Radius used when evaluating singular radial sources: |X| floored at h/2.
    double origin_cap() const { return 0.5 * h; }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool same_layout(const GridFunction& o) const {
        return dim == o.dim && m == o.m && band_width == o.band_width;
    }

    /// Max of |values| over non-exterior nodes.
    double max_abs() const;
    std::size_t count(NodeMask kind) const;
};

/// Evaluate fn(X) at every node (including the Dirichlet band and exterior).
template <class F>
GridFunction tabulate(int dim, int m, F&& fn, int band_width = 2) {
    GridFunction g(dim, m, band_width);
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = fn(g.node(i));
    return g;
}

/// Radial power source A * max(|X|, h/2)^expo tabulated on the grid.
GridFunction tabulate_radial_power(int dim, int m, double amplitude, double expo,
                                   int band_width = 2);
/// A * ln(max(|X|, h/2)).
GridFunction tabulate_radial_log(int dim, int m, double amplitude, int band_width = 2);

// (i, j[, k], value) CSV with a one-line layout header, and a flat binary twin.
void write_grid_csv(const GridFunction& g, const std::string& path);
GridFunction read_grid_csv(const std::string& path);
void write_grid_binary(const GridFunction& g, const std::string& path);
GridFunction read_grid_binary(const std::string& path);

}  // namespace plab
