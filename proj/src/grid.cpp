#include "plab/grid.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plab {

GridFunction::GridFunction(int dim_, int m_, int band_width_)
    : dim(dim_), m(m_), band_width(band_width_) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("GridFunction: dim must be 2 or 3");
    if (m < 3) throw std::invalid_argument("GridFunction: need at least 3 nodes per axis");
    if (band_width < 1) throw std::invalid_argument("GridFunction: band_width must be >= 1");
    h = 2.0 / (m - 1);
    const std::size_t n = dim == 2 ? static_cast<std::size_t>(m) * m
                                   : static_cast<std::size_t>(m) * m * m;
    values.assign(n, 0.0);
    mask.resize(n);
    const double band_inner = 1.0 - band_width * h;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double r = norm2(node(idx));
        mask[idx] = r < band_inner ? NodeMask::Interior
                    : r <= 1.0     ? NodeMask::BoundaryBand
                                   : NodeMask::Exterior;
    }
}

double GridFunction::max_abs() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        if (mask[i] != NodeMask::Exterior) best = std::max(best, std::abs(values[i]));
    return best;
}

std::size_t GridFunction::count(NodeMask kind) const {
    std::size_t n = 0;
    for (auto mk : mask) n += mk == kind;
    return n;
}

GridFunction tabulate_radial_power(int dim, int m, double amplitude, double expo, int band_width) {
    GridFunction g(dim, m, band_width);
    const double cap = g.origin_cap();
    for (std::size_t i = 0; i < g.size(); ++i)
        g.values[i] = amplitude * std::pow(std::max(norm2(g.node(i)), cap), expo);
    return g;
}

GridFunction tabulate_radial_log(int dim, int m, double amplitude, int band_width) {
    GridFunction g(dim, m, band_width);
    const double cap = g.origin_cap();
    for (std::size_t i = 0; i < g.size(); ++i)
        g.values[i] = amplitude * std::log(std::max(norm2(g.node(i)), cap));
    return g;
}

namespace {

void format_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

void write_grid_csv(const GridFunction& g, const std::string& path) {
    std::string out;
    out.reserve(g.size() * 24 + 64);
    {
        char head[96];
        std::snprintf(head, sizeof head, "# dim=%d m=%d h=%.17g band=%d\n", g.dim, g.m, g.h,
                      g.band_width);
        out += head;
    }
    out += g.dim == 2 ? "i,j,value\n" : "i,j,k,value\n";
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const int i = static_cast<int>(idx % g.m);
        const int j = static_cast<int>((idx / g.m) % g.m);
        out += std::to_string(i);
        out += ',';
        out += std::to_string(j);
        out += ',';
        if (g.dim == 3) {
            out += std::to_string(static_cast<int>(idx / (static_cast<std::size_t>(g.m) * g.m)));
            out += ',';
        }
        format_double(out, g.values[idx]);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << out;
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("# dim=", 0) != 0)
        throw std::runtime_error("grid CSV missing layout header: " + path);
    int dim = 0, m = 0, band = 2;
    double h = 0.0;
    if (std::sscanf(line.c_str(), "# dim=%d m=%d h=%lf band=%d", &dim, &m, &h, &band) < 3)
        throw std::runtime_error("malformed grid CSV header: " + line);
    GridFunction g(dim, m, band);
    std::getline(f, line);  // column names
    std::size_t seen = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        int i = 0, j = 0, k = 0;
        double v = 0.0;
        if (dim == 2) {
            if (std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &v) != 3)
                throw std::runtime_error("malformed grid CSV row: " + line);
        } else {
            if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &i, &j, &k, &v) != 4)
                throw std::runtime_error("malformed grid CSV row: " + line);
        }
        g.values[g.index(i, j, k)] = v;
        ++seen;
    }
    if (seen != g.size()) throw std::runtime_error("grid CSV row count mismatch: " + path);
    return g;
}

void write_grid_binary(const GridFunction& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const char magic[8] = {'P', 'L', 'A', 'B', 'G', 'R', 'D', '1'};
    f.write(magic, 8);
    const std::int32_t meta[3] = {g.dim, g.m, g.band_width};
    f.write(reinterpret_cast<const char*>(meta), sizeof meta);
    f.write(reinterpret_cast<const char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
}

GridFunction read_grid_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "PLABGRD1")
        throw std::runtime_error("not a grid binary: " + path);
    std::int32_t meta[3];
    f.read(reinterpret_cast<char*>(meta), sizeof meta);
    GridFunction g(meta[0], meta[1], meta[2]);
    f.read(reinterpret_cast<char*>(g.values.data()),
           static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated grid binary: " + path);
    return g;
}

}  // namespace plab
