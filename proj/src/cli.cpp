#include "plab/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "plab/analysis.hpp"
#include "plab/norms.hpp"
#include "plab/scenario_io.hpp"

namespace plab::cli {

namespace fs = std::filesystem;

namespace {

std::string default_output_root() {
    if (const char* env = std::getenv("PLAB_OUTPUT_ROOT")) return env;
    return "plab_out";
}

int fail(int code, const std::string& message) {
    std::fprintf(stderr, "error: code=%d message=\"%s\"\n", code, message.c_str());
    return code;
}

std::vector<double> split_doubles(const std::string& csv) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(csv);
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

Scenario resolve_scenario(const std::string& builtin, const std::string& file, int res,
                          std::uint64_t seed, bool seed_set) {
    Scenario s = file.empty() ? builtin_scenario(builtin) : load_scenario_file(file);
    if (res > 0) s.resolution = res;
    if (seed_set) s.seed = seed;
    return s;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_scenario(const std::string& builtin, const std::string& file, int res, std::uint64_t seed,
                 bool seed_set, const std::string& out_root) {
    const Scenario s = resolve_scenario(builtin, file, res, seed, seed_set);
    const ScenarioReport rep = run_scenario(s);
    const fs::path dir = fs::path(out_root) / s.name;
    write_scenario_report(rep, dir.string());
    std::ofstream cfg(dir / "scenario.cfg", std::ios::binary);
    cfg << scenario_to_config(s);
    std::printf("scenario=%s verdict=\"%s\" fitted_alpha=%s out=%s\n", rep.name.c_str(),
                rep.verdict.summary.c_str(), num(rep.verdict.fitted_alpha).c_str(),
                dir.string().c_str());
    if (!rep.verdict.solver_converged)
        return fail(kExitNotConverged, "solver hit max_iters; partial report written");
    return kExitOk;
}

int cmd_sweep(std::vector<double> ps, std::vector<double> thetas, int res, std::uint64_t seed,
              bool seed_set, const std::string& out_root, int workers) {
    if (ps.empty() || thetas.empty()) return fail(kExitUsage, "sweep needs --p and --theta grids");
    struct Job {
        double p, theta;
        Scenario scenario;
        ScenarioReport report;
        bool ok = false;
        std::string error;
    };
    std::vector<Job> jobs;
    for (double p : ps)
        for (double theta : thetas) {
            if (!(theta > 1.0 && theta < p)) continue;  // outside the admissible wedge
            Scenario s = builtin_scenario("sharp-theta");
            const double beta = p / (p - 1.0) * (theta - 1.0) / theta;
            const auto [c, e] = p_laplacian_of_power(p, 2, beta);
            s.name = "p" + num(p) + "_theta" + num(theta);
            s.field = make_field(p, 2, CoefficientField::constant(1.0));
            s.source = SourceRule::radial_power(-c, e);
            s.boundary = BoundaryData::radial_power(1.0, beta);
            s.theta = theta;
            if (res > 0) s.resolution = res;
            if (seed_set) s.seed = seed;
            jobs.push_back({p, theta, std::move(s), {}, false, ""});
        }
    if (jobs.empty()) return fail(kExitUsage, "sweep grid is empty (need 1 < theta < p)");

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                jobs[i].report = run_scenario(jobs[i].scenario);
                jobs[i].ok = true;
            } catch (const std::exception& ex) {
                jobs[i].error = ex.what();
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fs::create_directories(out_root);
    std::string index = "p,theta,predicted_alpha,fitted_alpha,residual,verdict\n";
    bool all_converged = true;
    for (auto& job : jobs) {
        if (!job.ok) return fail(kExitIo, "sweep job failed: " + job.error);
        write_scenario_report(job.report, (fs::path(out_root) / job.report.name).string());
        const auto& v = job.report.verdict;
        index += num(job.p) + "," + num(job.theta) + "," +
                 num(v.predicted_alpha.value_or(0.0)) + "," + num(v.fitted_alpha) + "," +
                 num(v.fit_residual) + "," + v.summary + "\n";
        all_converged = all_converged && v.solver_converged;
    }
    std::ofstream out(fs::path(out_root) / "sweep_index.csv", std::ios::binary);
    out << index;
    std::printf("sweep rows=%zu out=%s\n", jobs.size(),
                (fs::path(out_root) / "sweep_index.csv").string().c_str());
    if (!all_converged)
        return fail(kExitNotConverged, "at least one sweep solve hit max_iters");
    return kExitOk;
}

int cmd_norms(const std::string& input, std::vector<double> weak_qs, std::vector<double> qs,
              bool bmo, std::vector<double> jn_alphas, const std::string& out_file) {
    const GridFunction g = read_grid_csv(input);
    std::vector<NormRow> rows;
    const double cap = g.origin_cap();
    for (double q : weak_qs)
        rows.push_back({"weak_lq", "q=" + num(q), weak_lebesgue_norm(g, q), g.m, cap});
    for (double q : qs) rows.push_back({"lq", "q=" + num(q), lebesgue_norm(g, q), g.m, cap});
    if (bmo) rows.push_back({"bmo", "family=dyadic", bmo_seminorm(g), g.m, cap});
    for (double a : jn_alphas) {
        const auto m = john_nirenberg_moment(g, {{0.0, 0.0, 0.0}, 1.0}, a);
        rows.push_back({"jn_moment", "alpha=" + num(a) + ";ball=B1", m.value, g.m, cap});
    }
    if (rows.empty()) return fail(kExitUsage, "norms: nothing requested");
    if (out_file.empty()) {
        std::printf("quantity,parameters,value,resolution,cap\n");
        for (const auto& r : rows)
            std::printf("%s,%s,%s,%d,%s\n", r.quantity.c_str(), r.parameters.c_str(),
                        num(r.value).c_str(), r.resolution, num(r.cap).c_str());
    } else {
        write_norm_table_csv(rows, out_file);
    }
    return kExitOk;
}

int cmd_solve(const std::string& builtin, const std::string& file, int res, std::uint64_t seed,
              bool seed_set, const std::string& out_root) {
    const Scenario s = resolve_scenario(builtin, file, res, seed, seed_set);
    const GridFunction f = s.source.tabulate(s.field.dim, s.resolution);
    const SolveReport rep = solve(f, s.field, s.boundary.rule(), s.solver);
    const fs::path dir = fs::path(out_root) / (s.name + "_solve");
    fs::create_directories(dir);
    write_grid_csv(rep.solution, (dir / "solution.csv").string());
    write_grid_csv(f, (dir / "source.csv").string());
    write_solve_summary(rep, (dir / "solve.txt").string());
    std::printf("solve=%s iterations=%d final_grad_norm=%s converged=%d out=%s\n", s.name.c_str(),
                rep.iterations, num(rep.final_grad_norm).c_str(), rep.converged ? 1 : 0,
                dir.string().c_str());
    if (!rep.converged)
        return fail(kExitNotConverged, "solver hit max_iters; partial report written");
    return kExitOk;
}

int cmd_alpha0(double p, int dim, const std::string& coeff_desc, int res, int samples,
               std::uint64_t seed) {
    std::string kind = coeff_desc, params;
    if (const auto colon = coeff_desc.find(':'); colon != std::string::npos) {
        kind = coeff_desc.substr(0, colon);
        params = coeff_desc.substr(colon + 1);
    }
    CoefficientField coeff = CoefficientField::constant(1.0);
    if (kind == "constant") {
        coeff = CoefficientField::constant(params.empty() ? 1.0 : std::stod(params));
    } else if (kind == "checkerboard") {
        const auto v = split_doubles(params);
        if (v.size() < 2) return fail(kExitUsage, "checkerboard coeff needs lo,hi[,cell]");
        coeff = CoefficientField::checkerboard(v[0], v[1], v.size() > 2 ? v[2] : 0.125);
    } else if (kind == "smooth") {
        coeff = named_smooth_coefficient(params);
    } else {
        return fail(kExitUsage, "unknown coefficient kind: " + kind);
    }
    const FieldSpec field = make_field(p, dim, std::move(coeff), p >= dim);
    SolveConfig config;
    const double a0 = estimate_alpha0(field, samples, config, res, seed);
    std::printf("alpha0_surrogate=%s p=%s dim=%d coeff=%s res=%d samples=%d\n", num(a0).c_str(),
                num(p).c_str(), dim, coeff_desc.c_str(), res, samples);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Numerical laboratory for degenerate p-Laplace equations: solves "
                 "-div(w(X)|Du|^{p-2}Du) = f on B_1 and measures BMO/Holder regularity "
                 "of the solutions"};
    app.require_subcommand(1);

    std::string builtin = "sharp-theta", file, out_root = default_output_root(), input, out_file;
    std::string coeff_desc = "constant:1";
    std::string p_list = "1.8", theta_list = "1.25,1.5,2";
    int res = 0, workers = 1, samples = 3, dim = 2;
    double p_single = 1.8;
    std::uint64_t seed = 12345;
    bool seed_set = false;
    std::vector<double> weak_qs, qs, jn_alphas;
    bool want_bmo = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (fixed seed => bit-reproducible outputs)")
            ->each([&](const std::string&) { seed_set = true; });
    };

    auto* sc = app.add_subcommand("scenario", "run one experiment and write its report directory");
    sc->add_option("--builtin", builtin, "bmo-log | sharp-theta | rough-media | smooth-media");
    sc->add_option("--file", file, "scenario config file (key=value)");
    sc->add_option("--res", res, "grid resolution override (nodes per axis)");
    sc->add_option("--out", out_root, "output root directory");
    add_seed(sc);

    auto* sw = app.add_subcommand("sweep", "run a (p, theta) grid of sharp-exponent scenarios");
    sw->add_option("--p", p_list, "comma-separated p values");
    sw->add_option("--theta", theta_list, "comma-separated theta values");
    sw->add_option("--res", res, "grid resolution override");
    sw->add_option("--out", out_root, "output root directory");
    sw->add_option("--workers", workers, "concurrent scenario executions");
    add_seed(sw);

    auto* no = app.add_subcommand("norms", "compute norms of a grid CSV");
    no->add_option("--input", input, "grid CSV file")->required();
    no->add_option("--weak-q", weak_qs, "weak-L^q norms to compute");
    no->add_option("--q", qs, "L^q norms to compute");
    no->add_flag("--bmo", want_bmo, "dyadic BMO seminorm");
    no->add_option("--jn", jn_alphas, "John-Nirenberg exponential moments on B_1");
    no->add_option("--out", out_file, "write CSV here instead of stdout");

    auto* so = app.add_subcommand("solve", "solve a scenario's equation and export the grid");
    so->add_option("--builtin", builtin, "builtin scenario name");
    so->add_option("--file", file, "scenario config file");
    so->add_option("--res", res, "grid resolution override");
    so->add_option("--out", out_root, "output root directory");
    add_seed(so);

    auto* al = app.add_subcommand("alpha0", "measure the homogeneous-solution decay exponent");
    al->add_option("--p", p_single, "degeneracy exponent");
    al->add_option("--dim", dim, "dimension (2 or 3)");
    al->add_option("--coeff", coeff_desc, "constant:w | checkerboard:lo,hi[,cell] | smooth:name");
    al->add_option("--res", res, "grid resolution (default 65)");
    al->add_option("--samples", samples, "number of random boundary data");
    add_seed(al);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sc->parsed()) return cmd_scenario(builtin, file, res, seed, seed_set, out_root);
        if (sw->parsed())
            return cmd_sweep(split_doubles(p_list), split_doubles(theta_list), res, seed, seed_set,
                             out_root, workers);
        if (no->parsed()) return cmd_norms(input, weak_qs, qs, want_bmo, jn_alphas, out_file);
        if (so->parsed()) return cmd_solve(builtin, file, res, seed, seed_set, out_root);
        if (al->parsed())
            return cmd_alpha0(p_single, dim, coeff_desc, res > 0 ? res : 65, samples, seed);
    } catch (const std::invalid_argument& ex) {
        return fail(kExitUsage, ex.what());
    } catch (const std::exception& ex) {
        return fail(kExitIo, ex.what());
    }
    return fail(kExitUsage, "unknown command");
}

}  // namespace plab::cli
