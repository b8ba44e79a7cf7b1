#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "plab/grid.hpp"

using namespace plab;

TEST_CASE("mask derives from node coordinates") {
    GridFunction g(2, 33);
    CHECK(g.h == doctest::Approx(2.0 / 32));
    const double band_inner = 1.0 - 2 * g.h;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = norm2(g.node(i));
        if (r < band_inner) CHECK(g.mask[i] == NodeMask::Interior);
        else if (r <= 1.0) CHECK(g.mask[i] == NodeMask::BoundaryBand);
        else CHECK(g.mask[i] == NodeMask::Exterior);
    }
    // the origin is a node at odd m, and the cube corners are exterior
    CHECK(g.mask[g.index(16, 16)] == NodeMask::Interior);
    CHECK(g.mask[g.index(0, 0)] == NodeMask::Exterior);
    CHECK(g.count(NodeMask::Interior) + g.count(NodeMask::BoundaryBand) +
              g.count(NodeMask::Exterior) ==
          g.size());
}

TEST_CASE("3-d grid layout") {
    GridFunction g(3, 9);
    CHECK(g.size() == 9 * 9 * 9);
    const auto X = g.node(g.index(2, 3, 4));
    CHECK(X[0] == doctest::Approx(-1.0 + 2 * g.h));
    CHECK(X[1] == doctest::Approx(-1.0 + 3 * g.h));
    CHECK(X[2] == doctest::Approx(-1.0 + 4 * g.h));
}

TEST_CASE("radial power tabulation caps at h/2") {
    auto f = tabulate_radial_power(2, 33, 1.0, -1.8);
    const std::size_t origin = f.index(16, 16);
    CHECK(f.values[origin] == doctest::Approx(std::pow(f.origin_cap(), -1.8)));
    const std::size_t off = f.index(24, 16);  // |X| = 0.5
    CHECK(f.values[off] == doctest::Approx(std::pow(0.5, -1.8)));
}

TEST_CASE("csv and binary round trips") {
    auto g = tabulate_radial_power(2, 17, 2.0, -0.5);
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string csv = (tmp / "plab_grid_test.csv").string();
    const std::string bin = (tmp / "plab_grid_test.bin").string();

    write_grid_csv(g, csv);
    const auto g2 = read_grid_csv(csv);
    REQUIRE(g2.same_layout(g));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g2.values[i] == g.values[i]);

    write_grid_binary(g, bin);
    const auto g3 = read_grid_binary(bin);
    REQUIRE(g3.same_layout(g));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g3.values[i] == g.values[i]);

    std::remove(csv.c_str());
    std::remove(bin.c_str());
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(GridFunction(4, 9), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(2, 2), std::invalid_argument);
}
