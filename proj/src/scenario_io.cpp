#include "plab/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "plab/radial.hpp"

namespace plab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!trim(tok).empty()) out.push_back(std::stod(tok));
    return out;
}

Scenario theta_scenario(std::string name, double p, double theta, CoefficientField coeff,
                        bool measure_alpha0) {
    const double beta = p / (p - 1.0) * (theta - 1.0) / theta;
    const auto [c, e] = p_laplacian_of_power(p, 2, beta);
    Scenario s{std::move(name), make_field(p, 2, std::move(coeff)),
               SourceRule::radial_power(-c, e),  // -Δ_p(r^beta) = -c r^{-p/theta}
               BoundaryData::radial_power(1.0, beta),
               theta,
               1.0,
               measure_alpha0,
               {},
               {},
               129,
               12345};
    return s;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
    if (name == "bmo-log") {
        Scenario s{"bmo-log",
                   make_field(1.8, 2, CoefficientField::constant(1.0)),
                   SourceRule::radial_power(1.0, -1.8),  // f = |X|^{-p}, borderline source
                   BoundaryData::constant(0.0),
                   std::nullopt,
                   1.0,
                   false,
                   {},
                   {},
                   129,
                   12345};
        return s;
    }
    if (name == "sharp-theta")
        return theta_scenario("sharp-theta", 1.8, 1.5, CoefficientField::constant(1.0), false);
    if (name == "rough-media") {
        Scenario s = theta_scenario("rough-media", 1.8, 1.5,
                                    CoefficientField::checkerboard(1.0, 2.0, 0.125), true);
        return s;
    }
    if (name == "smooth-media")
        return theta_scenario("smooth-media", 1.8, 1.5,
                              named_smooth_coefficient("radial-quadratic"), false);
    throw std::invalid_argument("unknown builtin scenario: " + name);
}

std::vector<std::string> builtin_scenario_names() {
    return {"bmo-log", "sharp-theta", "rough-media", "smooth-media"};
}

std::string scenario_to_config(const Scenario& s) {
    char buf[192];
    std::string out = "name=" + s.name + "\n";
    out += field_to_config(s.field);
    if (s.theta) {
        std::snprintf(buf, sizeof buf, "theta=%.17g\n", *s.theta);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "alpha0=%.17g\nmeasure_alpha0=%d\n", s.alpha0,
                  s.measure_alpha0 ? 1 : 0);
    out += buf;
    const char* source_kind = s.source.kind == SourceRule::Kind::Zero          ? "zero"
                              : s.source.kind == SourceRule::Kind::RadialPower ? "radial-power"
                                                                               : "radial-log";
    std::snprintf(buf, sizeof buf, "source.kind=%s\nsource.amplitude=%.17g\nsource.exponent=%.17g\n",
                  source_kind, s.source.amplitude, s.source.exponent);
    out += buf;
    const char* boundary_kind =
        s.boundary.kind == BoundaryData::Kind::Constant ? "constant" : "radial-power";
    std::snprintf(buf, sizeof buf, "boundary.kind=%s\nboundary.value=%.17g\nboundary.beta=%.17g\n",
                  boundary_kind, s.boundary.value, s.boundary.beta);
    out += buf;
    std::snprintf(buf, sizeof buf, "resolution=%d\nseed=%llu\n", s.resolution,
                  static_cast<unsigned long long>(s.seed));
    out += buf;
    std::snprintf(buf, sizeof buf, "solver.max_iters=%d\nsolver.grad_tol=%.17g\n",
                  s.solver.max_iters, s.solver.grad_tol);
    out += buf;
    out += "solver.epsilon_schedule=";
    for (std::size_t i = 0; i < s.solver.epsilon_schedule.size(); ++i) {
        std::snprintf(buf, sizeof buf, i ? ",%.17g" : "%.17g", s.solver.epsilon_schedule[i]);
        out += buf;
    }
    out += "\n";
    std::snprintf(buf, sizeof buf,
                  "diag.lambda=%.17g\ndiag.max_levels=%d\ndiag.min_nodes=%d\n"
                  "diag.fit_tolerance=%.17g\n",
                  s.diagnostics.lambda, s.diagnostics.max_levels, s.diagnostics.min_nodes,
                  s.diagnostics.fit_tolerance);
    out += buf;
    return out;
}

Scenario scenario_from_config(const std::string& text) {
    Scenario s{"scenario",
               field_from_config(text),
               SourceRule::zero(),
               BoundaryData::constant(0.0),
               std::nullopt,
               1.0,
               false,
               {},
               {},
               129,
               12345};
    std::string source_kind = "zero", boundary_kind = "constant";
    double source_amp = 0.0, source_exp = 0.0, boundary_value = 0.0, boundary_beta = 0.0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "name") s.name = val;
        else if (key == "theta") s.theta = std::stod(val);
        else if (key == "alpha0") s.alpha0 = std::stod(val);
        else if (key == "measure_alpha0") s.measure_alpha0 = val == "1" || val == "true";
        else if (key == "source.kind") source_kind = val;
        else if (key == "source.amplitude") source_amp = std::stod(val);
        else if (key == "source.exponent") source_exp = std::stod(val);
        else if (key == "boundary.kind") boundary_kind = val;
        else if (key == "boundary.value") boundary_value = std::stod(val);
        else if (key == "boundary.beta") boundary_beta = std::stod(val);
        else if (key == "resolution") s.resolution = std::stoi(val);
        else if (key == "seed") s.seed = std::stoull(val);
        else if (key == "solver.max_iters") s.solver.max_iters = std::stoi(val);
        else if (key == "solver.grad_tol") s.solver.grad_tol = std::stod(val);
        else if (key == "solver.epsilon_schedule") s.solver.epsilon_schedule = parse_list(val);
        else if (key == "diag.lambda") s.diagnostics.lambda = std::stod(val);
        else if (key == "diag.max_levels") s.diagnostics.max_levels = std::stoi(val);
        else if (key == "diag.min_nodes") s.diagnostics.min_nodes = std::stoi(val);
        else if (key == "diag.fit_tolerance") s.diagnostics.fit_tolerance = std::stod(val);
    }
    if (source_kind == "zero") s.source = SourceRule::zero();
    else if (source_kind == "radial-power") s.source = SourceRule::radial_power(source_amp, source_exp);
    else if (source_kind == "radial-log") s.source = SourceRule::radial_log(source_amp);
    else throw std::invalid_argument("unknown source.kind: " + source_kind);
    if (boundary_kind == "constant") s.boundary = BoundaryData::constant(boundary_value);
    else if (boundary_kind == "radial-power")
        s.boundary = BoundaryData::radial_power(boundary_value, boundary_beta);
    else throw std::invalid_argument("unknown boundary.kind: " + boundary_kind);
    if (s.theta && !(*s.theta > 1.0 && *s.theta < s.field.p))
        throw std::invalid_argument("scenario: theta must lie in (1, p)");
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_config(ss.str());
}

}  // namespace plab
