// velavg command line: degeneracy fits, exponent predictions, regularity
// estimates, PDE solves and the experiment pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "velavg/config.hpp"
#include "velavg/degeneracy.hpp"
#include "velavg/error.hpp"
#include "velavg/experiments.hpp"
#include "velavg/exponents.hpp"
#include "velavg/littlewood_paley.hpp"
#include "velavg/pde.hpp"

namespace fs = std::filesystem;
using namespace velavg;

namespace {

std::string opt_str(const std::optional<double>& x) { return x ? fmt::format("{:.6g}", *x) : "none"; }

int cmd_fit(const std::string& config, int dlo, int dhi, const std::vector<double>& J, bool analytic,
            const std::string& csv) {
    const SymbolSpec spec = load_symbol(config);
    const auto prof = analytic ? degeneracy::analytic_profile(spec)
                               : degeneracy::fit_degeneracy(spec, degeneracy::dyadic_grid(dlo, dhi), J);
    fmt::print("status   {}\n", degeneracy::to_string(prof.status));
    fmt::print("alpha    {:.6g} +- {:.2g}\n", prof.alpha, prof.alpha_stderr);
    fmt::print("beta     {:.6g} +- {:.2g}\n", prof.beta, prof.beta_stderr);
    fmt::print("mu       {:.6g} +- {:.2g}{}\n", prof.mu, prof.mu_stderr, prof.mu_clamped ? " (clamped)" : "");
    fmt::print("lambda   {:.6g} +- {:.2g}\n", prof.lambda, prof.lambda_stderr);
    if (prof.degenerate_flag) fmt::print("degenerate: no regularising effect detected\n");
    if (!prof.note.empty()) fmt::print("note     {}\n", prof.note);
    if (!csv.empty()) {
        std::ofstream out(csv);
        out << "J,delta,measure,sup_symbol_v\n";
        for (const auto& g : prof.grid)
            out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", g.J, g.delta, g.measure, g.sup_symbol_v);
    }
    return 0;
}

int cmd_predict(const std::string& example, const exponents::ExampleParams& params) {
    const auto rec = exponents::paper_prediction(example, params);
    fmt::print("example  {}\n", rec.example);
    fmt::print("s_max    {}\n", opt_str(rec.s_max));
    if (rec.s_upper) fmt::print("s_upper  {}\n", opt_str(rec.s_upper));
    if (rec.clamped) fmt::print("clamped  yes\n");
    if (!rec.regime.empty()) fmt::print("regime   {}\n", rec.regime);
    if (!rec.reason.empty()) fmt::print("reason   {}\n", rec.reason);
    return 0;
}

int cmd_estimate(const std::string& in, double p, const std::string& method, const std::string& window,
                 const std::string& csv) {
    const ScalarField f = read_field(in);
    lp::Window w;
    w.kind = lp::parse_window_kind(window);
    const auto est = lp::estimate_regularity(f, p, w, lp::parse_method(method));
    std::FILE* table = stdout;
    std::FILE* file = nullptr;
    if (!csv.empty()) {
        file = std::fopen(csv.c_str(), "w");
        if (!file) throw Error(fmt::format("cannot write '{}'", csv));
        table = file;
    }
    fmt::print(table, "j,norm,used\n");
    for (const auto& b : est.bands) fmt::print(table, "{},{:.12g},{}\n", b.j, b.norm, b.used ? 1 : 0);
    if (file) std::fclose(file);
    fmt::print("\ns_star   {:.4f} +- {:.4f}\n", est.s_star, est.stderr_);
    fmt::print("s_raw    {:.4f} (r^2 {:.4f})\n", est.s_raw, est.r_squared);
    fmt::print("octaves  {}..{}\n", est.j_min, est.j_max);
    fmt::print("flags    {}{}{}\n", est.bv_flag ? "bv " : "", est.smooth_flag ? "smooth " : "",
               est.capped ? "capped" : "");
    for (const auto& w2 : est.warnings) fmt::print("warning  {}\n", w2);
    return 0;
}

int cmd_solve(const std::string& config, const std::string& out_dir, std::size_t n_override) {
    auto cfg = load_config(config);
    if (cfg.problem != ProblemKind::evolution) throw InputError("solve handles evolution problems only");
    const std::size_t n = n_override ? n_override : cfg.ladder.back();
    const GridLayout g(cfg.symbol.dim(), n, cfg.L);
    ScalarField rho0 = pde::make_initial_data(g, cfg.data);
    rho0.label = cfg.id;
    const auto traj = cfg.symbol.has_diffusion() ? pde::solve_convection_diffusion(cfg.symbol, rho0, cfg.scheme)
                                                 : pde::solve_conservation_law(cfg.symbol, rho0, cfg.scheme);
    fs::create_directories(out_dir);
    std::ofstream index(fs::path(out_dir) / "index.csv");
    index << "t,file,mass\n";
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto& s = traj.snapshots[k];
        const std::string name = fmt::format("snapshot_{:04d}.txt", k);
        write_field(fs::path(out_dir) / name, s.field);
        index << fmt::format("{:.12g},{},{:.17g}\n", s.t, name, s.mass);
    }
    fmt::print("{} steps, dt <= {:.3e}, relative mass drift {:.2e}\n", traj.steps, traj.dt_max,
               traj.relative_mass_drift());
    return 0;
}

void print_rows(const std::vector<experiments::ComparisonRow>& rows) {
    for (const auto& r : rows) {
        const auto* m = r.finest();
        fmt::print("{:<24} predicted {:<8} measured {:<18} {}\n", r.id, opt_str(r.predicted),
                   m ? fmt::format("{:.4f} +- {:.4f}", m->s_star, m->stderr_) : "-",
                   r.verdict == experiments::Verdict::failed ? "failed: " + r.failure
                                                             : experiments::to_string(r.verdict));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"velavg: velocity averaging regularity experiments"};
    app.require_subcommand(1);

    std::string config, out = "velavg-out", in, csv, method = "lp", window = "plateau", example;
    int dlo = -10, dhi = -3;
    std::vector<double> J{1, 4, 16, 64};
    bool analytic = false;
    double p = 1.0;
    std::size_t n = 0;
    exponents::ExampleParams ep;

    auto* fit = app.add_subcommand("fit-degeneracy", "fit (alpha, beta, mu, lambda) for the [symbol] of a config");
    fit->add_option("--config", config, "config file with a [symbol] section")->required()->check(CLI::ExistingFile);
    fit->add_option("--delta-lo", dlo, "log2 of the smallest delta");
    fit->add_option("--delta-hi", dhi, "log2 of the largest delta");
    fit->add_option("--J", J, "frequency magnitudes");
    fit->add_flag("--analytic", analytic, "closed-form profile instead of a fit");
    fit->add_option("--csv", csv, "write the measurement grid");

    auto* pred = app.add_subcommand("predict", "predicted regularity exponent of a worked example");
    pred->add_option("--example", example, "burgers, twod-flux, sine-cubic, porous, convdiff, twod-convdiff, "
                                           "fully-degenerate, elliptic")
        ->required();
    pred->add_option("--ell", ep.ell);
    pred->add_option("--m", ep.m);
    pred->add_option("--n", ep.n);
    pred->add_option("--alpha", ep.alpha);
    pred->add_option("--p-data", ep.p_data, "integrability of the data (default infinity)");

    auto* est = app.add_subcommand("estimate-regularity", "W^{s,p} exponent of a field file");
    est->add_option("--in", in, "field file")->required()->check(CLI::ExistingFile);
    est->add_option("--p", p, "integrability exponent");
    est->add_option("--method", method, "lp or increments");
    est->add_option("--window", window, "plateau, distance or none");
    est->add_option("--csv", csv, "band table destination (default stdout)");

    auto* solve = app.add_subcommand("solve", "run the solver of an evolution config");
    solve->add_option("--config", config)->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out, "trajectory directory");
    solve->add_option("--n", n, "grid size (default: finest ladder entry)");

    auto* exp = app.add_subcommand("experiment", "run experiments");
    exp->require_subcommand(1);
    auto* run = exp->add_subcommand("run", "one config");
    run->add_option("config", config)->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory");
    auto* suite = exp->add_subcommand("suite", "all configs in a directory or matching a glob");
    suite->add_option("configs", config)->required();
    suite->add_option("--out", out, "output directory");

    auto* report = app.add_subcommand("report", "rebuild report.csv / report.md from an output directory");
    report->add_option("dir", out)->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) return cmd_fit(config, dlo, dhi, J, analytic, csv);
        if (*pred) return cmd_predict(example, ep);
        if (*est) return cmd_estimate(in, p, method, window, csv);
        if (*solve) return cmd_solve(config, out, n);
        if (*run) {
            const auto row = experiments::run_experiment(load_config(config), out);
            print_rows({row});
            return experiments::exit_code({row});
        }
        if (*suite) {
            const auto rows = experiments::run_suite(config, out);
            print_rows(rows);
            return experiments::exit_code(rows);
        }
        if (*report) {
            const auto rows = experiments::read_rows(out);
            experiments::write_report(rows, out);
            print_rows(rows);
            return experiments::exit_code(rows);
        }
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
