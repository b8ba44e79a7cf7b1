#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plab/analysis.hpp"
#include "plab/field.hpp"
#include "plab/grid.hpp"
#include "plab/norms.hpp"
#include "plab/radial.hpp"
#include "plab/scenario_io.hpp"
#include "plab/solver.hpp"

namespace py = pybind11;
using namespace plab;

namespace {

py::array_t<double> grid_values(const GridFunction& g) {
    if (g.dim == 2) {
        py::array_t<double> out({g.m, g.m});
        std::copy(g.values.begin(), g.values.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out({g.m, g.m, g.m});
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
}

void grid_set_values(GridFunction& g, py::array_t<double, py::array::c_style> arr) {
    if (static_cast<std::size_t>(arr.size()) != g.size())
        throw std::invalid_argument("value array size does not match the grid");
    std::copy(arr.data(), arr.data() + arr.size(), g.values.begin());
}

GridFunction grid_from_array(int dim, py::array_t<double, py::array::c_style> arr,
                             int band_width) {
    const int m = static_cast<int>(arr.shape(0));
    GridFunction g(dim, m, band_width);
    grid_set_values(g, std::move(arr));
    return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Degenerate p-Laplace solver and regularity diagnostics";

    py::enum_<NodeMask>(m, "NodeMask")
        .value("Interior", NodeMask::Interior)
        .value("BoundaryBand", NodeMask::BoundaryBand)
        .value("Exterior", NodeMask::Exterior);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<int, int, int>(), py::arg("dim"), py::arg("m"), py::arg("band_width") = 2)
        .def_readonly("dim", &GridFunction::dim)
        .def_readonly("m", &GridFunction::m)
        .def_readonly("h", &GridFunction::h)
        .def_readonly("band_width", &GridFunction::band_width)
        .def_property("values", &grid_values, &grid_set_values)
        .def("node", &GridFunction::node)
        .def("origin_cap", &GridFunction::origin_cap)
        .def("max_abs", &GridFunction::max_abs)
        .def_static("from_array", &grid_from_array, py::arg("dim"), py::arg("values"),
                    py::arg("band_width") = 2)
        .def("__repr__", [](const GridFunction& g) {
            return "GridFunction(dim=" + std::to_string(g.dim) + ", m=" + std::to_string(g.m) +
                   ")";
        });
    m.def("tabulate_radial_power", &tabulate_radial_power, py::arg("dim"), py::arg("m"),
          py::arg("amplitude"), py::arg("exponent"), py::arg("band_width") = 2);
    m.def("tabulate_radial_log", &tabulate_radial_log, py::arg("dim"), py::arg("m"),
          py::arg("amplitude"), py::arg("band_width") = 2);
    m.def("write_grid_csv", &write_grid_csv);
    m.def("read_grid_csv", &read_grid_csv);

    py::class_<CoefficientField>(m, "CoefficientField")
        .def_static("constant", &CoefficientField::constant, py::arg("w"))
        .def_static("checkerboard", &CoefficientField::checkerboard, py::arg("lo"), py::arg("hi"),
                    py::arg("cell") = 0.125)
        .def_static(
            "smooth",
            [](const std::string& name, std::function<double(std::vector<double>)> fn, double lo,
               double hi) {
                return CoefficientField::smooth(
                    name,
                    [fn](std::span<const double> X) {
                        return fn(std::vector<double>(X.begin(), X.end()));
                    },
                    lo, hi);
            },
            py::arg("name"), py::arg("fn"), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("lo", &CoefficientField::lo)
        .def_property_readonly("hi", &CoefficientField::hi)
        .def("scalar_at", [](const CoefficientField& c, std::vector<double> X) {
            return c.scalar_at(X);
        });
    m.def("named_smooth_coefficient", &named_smooth_coefficient);

    py::class_<FieldSpec>(m, "FieldSpec")
        .def(py::init<double, int, CoefficientField, double, double, bool>(), py::arg("p"),
             py::arg("dim"), py::arg("coeff"), py::arg("lambda_lo"), py::arg("lambda_hi"),
             py::arg("formal") = false)
        .def_readonly("p", &FieldSpec::p)
        .def_readonly("dim", &FieldSpec::dim)
        .def_readonly("lambda_lo", &FieldSpec::lambda_lo)
        .def_readonly("lambda_hi", &FieldSpec::lambda_hi)
        .def_readonly("formal", &FieldSpec::formal);
    m.def("make_field", &make_field, py::arg("p"), py::arg("dim"), py::arg("coeff"),
          py::arg("formal") = false);
    m.def("sharp_ellipticity", &sharp_ellipticity);
    m.def("evaluate_field",
          [](const FieldSpec& spec, std::vector<double> X, std::vector<double> xi) {
              return evaluate_field(spec, X, xi);
          });
    m.def("field_to_config", &field_to_config);
    m.def("field_from_config", &field_from_config);

    py::class_<StructureAuditReport>(m, "StructureAuditReport")
        .def_readonly("samples", &StructureAuditReport::samples)
        .def_readonly("flagged", &StructureAuditReport::flagged)
        .def_readonly("growth_ratio", &StructureAuditReport::growth_ratio)
        .def_readonly("jacobian_ratio", &StructureAuditReport::jacobian_ratio)
        .def_readonly("monotonicity_ratio", &StructureAuditReport::monotonicity_ratio)
        .def_readonly("growth_ok", &StructureAuditReport::growth_ok)
        .def_readonly("monotonicity_ok", &StructureAuditReport::monotonicity_ok)
        .def("passed", &StructureAuditReport::pass);
    m.def("audit_structure", &audit_structure, py::arg("spec"), py::arg("sample_count"),
          py::arg("seed") = 12345);
    m.def("continuity_modulus", &continuity_modulus, py::arg("spec"), py::arg("radii"),
          py::arg("samples_per_radius") = 4096, py::arg("seed") = 12345);

    py::class_<RadialProfile>(m, "RadialProfile")
        .def_static("power", &RadialProfile::power, py::arg("c"), py::arg("beta"),
                    py::arg("cap") = 0.0)
        .def_static("log", &RadialProfile::log, py::arg("c"), py::arg("cap") = 0.0)
        .def_static("tabulated", &RadialProfile::tabulated)
        .def("__call__", &RadialProfile::operator());
    m.def("p_laplacian_of_power", &p_laplacian_of_power, py::arg("p"), py::arg("n"),
          py::arg("beta"));
    m.def("p_laplacian_of_log", &p_laplacian_of_log, py::arg("p"), py::arg("n"), py::arg("c"));
    m.def("log_solution_constant", &log_solution_constant, py::arg("p"), py::arg("n"));

    py::class_<RadialSolveResult>(m, "RadialSolveResult")
        .def_readonly("r", &RadialSolveResult::r)
        .def_readonly("u", &RadialSolveResult::u)
        .def_readonly("flux", &RadialSolveResult::flux)
        .def_readonly("quadrature_nodes", &RadialSolveResult::quadrature_nodes)
        .def_readonly("refinement_delta", &RadialSolveResult::refinement_delta)
        .def_readonly("converged", &RadialSolveResult::converged)
        .def("value_at", &RadialSolveResult::value_at)
        .def("flux_at", &RadialSolveResult::flux_at);
    m.def("solve_radial_dirichlet", &solve_radial_dirichlet, py::arg("f"), py::arg("p"),
          py::arg("n"), py::arg("boundary"), py::arg("nodes"), py::arg("r_min") = 1e-6,
          py::arg("tol") = 1e-8);

    py::class_<SampleCloud>(m, "SampleCloud")
        .def(py::init<>())
        .def_readwrite("dim", &SampleCloud::dim)
        .def_readwrite("points", &SampleCloud::points)
        .def_readwrite("values", &SampleCloud::values)
        .def_readwrite("weight", &SampleCloud::weight);
    py::class_<BallSpec>(m, "BallSpec")
        .def(py::init([](Point c, double r) { return BallSpec{c, r}; }), py::arg("center"),
             py::arg("radius"))
        .def_readwrite("center", &BallSpec::center)
        .def_readwrite("radius", &BallSpec::radius);
    m.def("ball_volume", &ball_volume);
    m.def("sample_unit_ball", &sample_unit_ball, py::arg("dim"), py::arg("count"),
          py::arg("seed") = 12345);
    m.def("weak_lebesgue_norm",
          py::overload_cast<const SampleCloud&, double>(&weak_lebesgue_norm));
    m.def("weak_lebesgue_norm",
          py::overload_cast<const GridFunction&, double>(&weak_lebesgue_norm));
    m.def("lebesgue_norm", py::overload_cast<const SampleCloud&, double>(&lebesgue_norm));
    m.def("lebesgue_norm", py::overload_cast<const GridFunction&, double>(&lebesgue_norm));
    m.def("mean_oscillation", &mean_oscillation, py::arg("u"), py::arg("ball"),
          py::arg("exponent"));
    m.def("ball_average", &ball_average);
    m.def("nodes_in_ball", &nodes_in_ball);
    m.def("dyadic_ball_family", &dyadic_ball_family, py::arg("u"), py::arg("min_nodes") = 100);
    m.def("bmo_seminorm", [](const GridFunction& u) { return bmo_seminorm(u); });
    m.def("bmo_seminorm", [](const GridFunction& u, const std::vector<BallSpec>& family) {
        return bmo_seminorm(u, family);
    });
    py::class_<JNMoment>(m, "JNMoment")
        .def_readonly("value", &JNMoment::value)
        .def_readonly("overflowed", &JNMoment::overflowed);
    m.def("john_nirenberg_moment", &john_nirenberg_moment, py::arg("u"), py::arg("ball"),
          py::arg("alpha"));

    py::class_<LineSearch>(m, "LineSearch")
        .def(py::init<>())
        .def_readwrite("shrink", &LineSearch::shrink)
        .def_readwrite("sufficient_decrease", &LineSearch::sufficient_decrease)
        .def_readwrite("max_backtracks", &LineSearch::max_backtracks);
    py::class_<SolveConfig>(m, "SolveConfig")
        .def(py::init<>())
        .def_readwrite("epsilon_schedule", &SolveConfig::epsilon_schedule)
        .def_readwrite("max_iters", &SolveConfig::max_iters)
        .def_readwrite("grad_tol", &SolveConfig::grad_tol)
        .def_readwrite("line_search", &SolveConfig::line_search)
        .def_readwrite("p2_warm_start", &SolveConfig::p2_warm_start);
    py::class_<StageRecord>(m, "StageRecord")
        .def_readonly("epsilon", &StageRecord::epsilon)
        .def_readonly("iterations", &StageRecord::iterations)
        .def_readonly("grad_norm", &StageRecord::grad_norm)
        .def_readonly("grad_norm_rel", &StageRecord::grad_norm_rel)
        .def_readonly("converged", &StageRecord::converged);
    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("solution", &SolveReport::solution)
        .def_readonly("energy_history", &SolveReport::energy_history)
        .def_readonly("stages", &SolveReport::stages)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("final_grad_norm", &SolveReport::final_grad_norm)
        .def_readonly("converged", &SolveReport::converged);
    m.def("discrete_energy", &discrete_energy, py::arg("u"), py::arg("f"), py::arg("field"),
          py::arg("epsilon"));
    m.def("energy_gradient", &energy_gradient, py::arg("u"), py::arg("f"), py::arg("field"),
          py::arg("epsilon"));
    m.def(
        "solve",
        [](const GridFunction& f, const FieldSpec& field, const std::function<double(Point)>& g,
           const SolveConfig& config) {
            return solve(f, field, [&g](const Point& X) { return g(X); }, config);
        },
        py::arg("f"), py::arg("field"), py::arg("boundary"), py::arg("config") = SolveConfig{});
    m.def(
        "solve_p2_linear",
        [](const GridFunction& f, const FieldSpec& field, const std::function<double(Point)>& g,
           double tol, int max_iters) {
            return solve_p2_linear(f, field, [&g](const Point& X) { return g(X); }, tol,
                                   max_iters);
        },
        py::arg("f"), py::arg("field"), py::arg("boundary"), py::arg("tol") = 1e-12,
        py::arg("max_iters") = 4000);

    py::class_<DecayLevel>(m, "DecayLevel")
        .def_readonly("k", &DecayLevel::k)
        .def_readonly("radius", &DecayLevel::radius)
        .def_readonly("c_k", &DecayLevel::c_k)
        .def_readonly("osc_k", &DecayLevel::osc_k)
        .def_readonly("nodes", &DecayLevel::nodes)
        .def_readonly("used", &DecayLevel::used);
    py::class_<DyadicDecayReport>(m, "DyadicDecayReport")
        .def_readonly("center", &DyadicDecayReport::center)
        .def_readonly("lambda_", &DyadicDecayReport::lambda)
        .def_readonly("levels", &DyadicDecayReport::levels)
        .def_readonly("fitted_alpha", &DyadicDecayReport::fitted_alpha)
        .def_readonly("fit_residual", &DyadicDecayReport::fit_residual)
        .def_readonly("degenerate", &DyadicDecayReport::degenerate);
    m.def("dyadic_decay", &dyadic_decay, py::arg("u"), py::arg("center"), py::arg("lambda_"),
          py::arg("p"), py::arg("max_levels"), py::arg("min_nodes") = 100);
    py::class_<HolderFit>(m, "HolderFit")
        .def_readonly("alpha", &HolderFit::alpha)
        .def_readonly("degenerate", &HolderFit::degenerate)
        .def_readonly("per_center", &HolderFit::per_center);
    m.def("fit_holder_exponent", &fit_holder_exponent, py::arg("u"), py::arg("centers"),
          py::arg("lambda_"), py::arg("p"), py::arg("max_levels") = 6, py::arg("min_nodes") = 100);

    py::class_<SourceRule>(m, "SourceRule")
        .def_static("zero", &SourceRule::zero)
        .def_static("radial_power", &SourceRule::radial_power, py::arg("amplitude"),
                    py::arg("exponent"))
        .def_static("radial_log", &SourceRule::radial_log, py::arg("amplitude"))
        .def("tabulate", &SourceRule::tabulate, py::arg("dim"), py::arg("m"),
             py::arg("band_width") = 2);
    py::class_<BoundaryData>(m, "BoundaryData")
        .def_static("constant", &BoundaryData::constant)
        .def_static("radial_power", &BoundaryData::radial_power, py::arg("amplitude"),
                    py::arg("beta"));

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("name", &Scenario::name)
        .def_readwrite("theta", &Scenario::theta)
        .def_readwrite("alpha0", &Scenario::alpha0)
        .def_readwrite("measure_alpha0", &Scenario::measure_alpha0)
        .def_readwrite("resolution", &Scenario::resolution)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("solver", &Scenario::solver)
        .def_readwrite("source", &Scenario::source)
        .def_readwrite("boundary", &Scenario::boundary)
        .def_readwrite("field", &Scenario::field)
        .def("predicted_alpha", &Scenario::predicted_alpha);
    m.def("builtin_scenario", &builtin_scenario);
    m.def("builtin_scenario_names", &builtin_scenario_names);
    m.def("scenario_to_config", &scenario_to_config);
    m.def("scenario_from_config", &scenario_from_config);

    py::class_<NormRow>(m, "NormRow")
        .def_readonly("quantity", &NormRow::quantity)
        .def_readonly("parameters", &NormRow::parameters)
        .def_readonly("value", &NormRow::value)
        .def_readonly("resolution", &NormRow::resolution)
        .def_readonly("cap", &NormRow::cap);
    py::class_<ScenarioVerdict>(m, "ScenarioVerdict")
        .def_readonly("predicted_alpha", &ScenarioVerdict::predicted_alpha)
        .def_readonly("fitted_alpha", &ScenarioVerdict::fitted_alpha)
        .def_readonly("fit_residual", &ScenarioVerdict::fit_residual)
        .def_readonly("exponent_within_tolerance", &ScenarioVerdict::exponent_within_tolerance)
        .def_readonly("bmo_change", &ScenarioVerdict::bmo_change)
        .def_readonly("sup_growth", &ScenarioVerdict::sup_growth)
        .def_readonly("bmo_stable", &ScenarioVerdict::bmo_stable)
        .def_readonly("sup_growing", &ScenarioVerdict::sup_growing)
        .def_readonly("solver_converged", &ScenarioVerdict::solver_converged)
        .def_readonly("summary", &ScenarioVerdict::summary);
    py::class_<ScenarioReport>(m, "ScenarioReport")
        .def_readonly("name", &ScenarioReport::name)
        .def_readonly("p", &ScenarioReport::p)
        .def_readonly("theta", &ScenarioReport::theta)
        .def_readonly("alpha0", &ScenarioReport::alpha0)
        .def_readonly("resolution_coarse", &ScenarioReport::resolution_coarse)
        .def_readonly("resolution_fine", &ScenarioReport::resolution_fine)
        .def_readonly("solve_coarse", &ScenarioReport::solve_coarse)
        .def_readonly("solve_fine", &ScenarioReport::solve_fine)
        .def_readonly("decay", &ScenarioReport::decay)
        .def_readonly("norm_table", &ScenarioReport::norm_table)
        .def_readonly("bmo_coarse", &ScenarioReport::bmo_coarse)
        .def_readonly("bmo_fine", &ScenarioReport::bmo_fine)
        .def_readonly("sup_coarse", &ScenarioReport::sup_coarse)
        .def_readonly("sup_fine", &ScenarioReport::sup_fine)
        .def_readonly("verdict", &ScenarioReport::verdict);
    m.def("run_scenario", &run_scenario, py::arg("scenario"),
          py::call_guard<py::gil_scoped_release>());
    m.def("estimate_alpha0", &estimate_alpha0, py::arg("field"), py::arg("boundary_samples"),
          py::arg("config") = SolveConfig{}, py::arg("resolution") = 65, py::arg("seed") = 12345,
          py::call_guard<py::gil_scoped_release>());

    py::class_<ScalingRow>(m, "ScalingRow")
        .def_readonly("level", &ScalingRow::level)
        .def_readonly("factor", &ScalingRow::factor)
        .def_readonly("weak_norm", &ScalingRow::weak_norm);
    py::class_<ScalingLawReport>(m, "ScalingLawReport")
        .def_readonly("p", &ScalingLawReport::p)
        .def_readonly("theta", &ScalingLawReport::theta)
        .def_readonly("alpha", &ScalingLawReport::alpha)
        .def_readonly("q", &ScalingLawReport::q)
        .def_readonly("rows", &ScalingLawReport::rows)
        .def_readonly("nonincreasing", &ScalingLawReport::nonincreasing);
    m.def("check_scaling_law", &check_scaling_law, py::arg("f"), py::arg("dim"),
          py::arg("resolution"), py::arg("p"), py::arg("theta"), py::arg("alpha"),
          py::arg("lambda_"), py::arg("levels"));

    m.def("write_scenario_report", &write_scenario_report, py::arg("report"),
          py::arg("directory"), py::arg("with_timestamp") = true);
}
