#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <fnmatch.h>

#include "velavg/degeneracy.hpp"
#include "velavg/elliptic.hpp"
#include "velavg/error.hpp"
#include "velavg/experiments.hpp"
#include "velavg/parallel.hpp"
#include "velavg/svg.hpp"

namespace velavg::experiments {
namespace fs = std::filesystem;

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::inconsistent: return "inconsistent";
        case Verdict::no_prediction: return "no-prediction";
        case Verdict::failed: return "failed";
    }
    return "failed";
}

Verdict parse_verdict(const std::string& s) {
    for (Verdict v : {Verdict::consistent, Verdict::inconsistent, Verdict::no_prediction, Verdict::failed})
        if (to_string(v) == s) return v;
    throw InputError(fmt::format("unknown verdict '{}'", s));
}

Verdict decide(const std::optional<double>& predicted, const Measurement& m, double* tolerance) {
    const double tol = 2.0 * m.stderr_ + kVerdictSlack;
    if (tolerance) *tolerance = tol;
    if (!predicted) return Verdict::no_prediction;
    return m.s_star >= *predicted - tol ? Verdict::consistent : Verdict::inconsistent;
}

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", x);
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

double parse_num(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

// CSV cells never contain commas except free text, which is quoted.
std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw Error(fmt::format("cannot write '{}'", p.string()));
    return out;
}

std::function<double(double, double)> boundary_function(const ExperimentConfig& cfg) {
    const auto& e = cfg.elliptic;
    const double L = cfg.L, A = e.amplitude, k = e.k;
    const int d = cfg.symbol.dim();
    if (e.boundary == "sine")
        return [=](double x1, double x2) { return A * std::sin(2.0 * std::numbers::pi * k * (x1 + x2) / L); };
    if (e.boundary == "harmonic") {
        if (d == 1) return [=](double x1, double) { return A * (x1 / L - 0.5); };
        return [=](double x1, double x2) {
            return A * ((x1 - 0.5 * L) * (x1 - 0.5 * L) - (x2 - 0.5 * L) * (x2 - 0.5 * L)) / (L * L);
        };
    }
    return [](double, double) { return 0.0; };
}

ScalarField solve_one(const ExperimentConfig& cfg, std::size_t n) {
    const int d = cfg.symbol.dim();
    if (cfg.problem == ProblemKind::elliptic) {
        pde::EllipticProblem pb{cfg.symbol, cfg.elliptic.source, d, n, cfg.L, boundary_function(cfg)};
        pde::EllipticOptions opt;
        opt.tolerance = cfg.elliptic.tolerance;
        opt.max_iterations = cfg.elliptic.max_iterations;
        return pde::solve_elliptic_degenerate(pb, opt).to_field(cfg.id);
    }
    const GridLayout g(d, n, cfg.L);
    ScalarField rho0 = pde::make_initial_data(g, cfg.data);
    rho0.label = cfg.id;
    const auto traj = cfg.symbol.has_diffusion() ? pde::solve_convection_diffusion(cfg.symbol, rho0, cfg.scheme)
                                                 : pde::solve_conservation_law(cfg.symbol, rho0, cfg.scheme);
    return traj.final_snapshot().field;
}

void write_row(const ComparisonRow& r, const fs::path& dir) {
    auto out = open_out(dir / "row.csv");
    out << "field,value\n";
    out << "id," << quote(r.id) << "\n";
    out << "example," << quote(r.example) << "\n";
    out << "predicted," << opt_num(r.predicted) << "\n";
    out << "predicted_upper," << opt_num(r.predicted_upper) << "\n";
    out << "clamped," << (r.clamped ? 1 : 0) << "\n";
    out << "regime," << quote(r.regime) << "\n";
    out << "prediction_reason," << quote(r.prediction_reason) << "\n";
    out << "general_s," << opt_num(r.general_s) << "\n";
    out << "general_status," << quote(r.general_status) << "\n";
    out << "profile_status," << quote(r.profile_status) << "\n";
    out << "alpha," << num(r.alpha) << "\n";
    out << "beta," << num(r.beta) << "\n";
    out << "mu," << num(r.mu) << "\n";
    out << "lambda," << num(r.lambda) << "\n";
    out << "verdict," << to_string(r.verdict) << "\n";
    out << "tolerance," << num(r.tolerance) << "\n";
    out << "failed_stage," << quote(r.failed_stage) << "\n";
    out << "failure," << quote(r.failure) << "\n";

    auto m = open_out(dir / "measurements.csv");
    m << "N,s_star,stderr,s_raw,j_min,j_max,bv_flag,smooth_flag,capped\n";
    for (const auto& x : r.measurements)
        m << fmt::format("{},{},{},{},{},{},{},{},{}\n", x.n, num(x.s_star), num(x.stderr_), num(x.s_raw), x.j_min,
                         x.j_max, x.bv_flag ? 1 : 0, x.smooth_flag ? 1 : 0, x.capped ? 1 : 0);
}

void plot_profile(const degeneracy::DegeneracyProfile& prof, const fs::path& dir) {
    auto out = open_out(dir / "profile.csv");
    out << "J,delta,measure,sup_symbol_v,used\n";
    std::map<double, svg::Series> by_J;
    for (std::size_t i = 0; i < prof.grid.size(); ++i) {
        const auto& g = prof.grid[i];
        const bool used = i < prof.used_in_fit.size() && prof.used_in_fit[i];
        out << fmt::format("{},{},{},{},{}\n", num(g.J), num(g.delta), num(g.measure), num(g.sup_symbol_v),
                           used ? 1 : 0);
        auto& s = by_J[g.J];
        s.label = fmt::format("J = {}", num(g.J));
        s.markers = true;
        s.x.push_back(std::log2(g.delta));
        s.y.push_back(g.measure > 0.0 ? std::log2(g.measure) : std::nan(""));
    }
    if (by_J.empty()) return;
    svg::Plot p{"set measure against delta", "log2 delta", "log2 |Omega|", {}};
    for (auto& [J, s] : by_J) p.series.push_back(std::move(s));
    svg::write(dir / "measure_vs_delta.svg", p);
}

void plot_field(const ScalarField& f, const fs::path& path) {
    const auto& g = f.layout;
    svg::Plot p{f.label, g.dim == 1 ? "x" : "x2 (midline x1 = L/2)", "rho", {}};
    svg::Series s;
    s.label = g.dim == 1 ? "rho" : "midline";
    for (std::size_t i = 0; i < g.n; ++i) {
        s.x.push_back(static_cast<double>(i) * g.dx());
        s.y.push_back(g.dim == 1 ? f.values[i] : f(g.n / 2, i));
    }
    p.series.push_back(std::move(s));
    if (g.dim == 2) {
        svg::Series diag;
        diag.label = "diagonal";
        for (std::size_t i = 0; i < g.n; ++i) {
            diag.x.push_back(static_cast<double>(i) * g.dx());
            diag.y.push_back(f(i, i));
        }
        p.series.push_back(std::move(diag));
    }
    svg::write(path, p);
}

}  // namespace

ComparisonRow run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
    const auto t_start = std::chrono::steady_clock::now();
    ComparisonRow row;
    row.id = cfg.id;
    row.example = cfg.example;
    fs::path dir;
    if (!out_dir.empty()) {
        dir = out_dir / cfg.id;
        fs::create_directories(dir);
    }
    auto fail = [&](const std::string& stage, const std::exception& e) {
        row.verdict = Verdict::failed;
        row.failed_stage = stage;
        row.failure = e.what();
    };

    // degeneracy profile
    std::optional<degeneracy::DegeneracyProfile> profile;
    try {
        if (cfg.prediction.mode == "fit") {
            profile = degeneracy::fit_degeneracy(
                cfg.symbol, degeneracy::dyadic_grid(cfg.prediction.delta_lo, cfg.prediction.delta_hi),
                cfg.prediction.J);
        } else {
            profile = degeneracy::analytic_profile(cfg.symbol);
        }
        row.profile_status = degeneracy::to_string(profile->status);
        row.alpha = profile->alpha;
        row.beta = profile->beta;
        row.mu = profile->mu;
        row.lambda = profile->lambda;
        if (!dir.empty()) plot_profile(*profile, dir);
    } catch (const std::exception& e) {
        fail("degeneracy", e);
    }

    // predictions
    if (row.verdict != Verdict::failed) {
        try {
            const auto rec = exponents::paper_prediction(cfg.example, cfg.params);
            row.predicted = rec.s_max;
            row.predicted_upper = rec.s_upper;
            row.clamped = rec.clamped;
            row.regime = rec.regime;
            row.prediction_reason = rec.reason;
            try {
                const auto gen = exponents::predict_general(*profile, cfg.prediction.lemma);
                row.general_status = exponents::to_string(gen.status);
                if (gen.status != exponents::PredictionStatus::no_prediction) row.general_s = gen.s_boot;
            } catch (const Error& e) {
                row.general_status = fmt::format("no_prediction: {}", e.what());
            }
            if (!dir.empty()) {
                auto out = open_out(dir / "prediction.csv");
                out << "field,value\n";
                out << "example_s_max," << opt_num(rec.s_max) << "\n";
                out << "example_s_upper," << opt_num(rec.s_upper) << "\n";
                out << "clamped," << (rec.clamped ? 1 : 0) << "\n";
                out << "regime," << quote(rec.regime) << "\n";
                out << "reason," << quote(rec.reason) << "\n";
                out << "general_s," << opt_num(row.general_s) << "\n";
                out << "general_status," << quote(row.general_status) << "\n";
            }
        } catch (const std::exception& e) {
            fail("prediction", e);
        }
    }

    // solve and measure along the ladder
    std::vector<svg::Series> decay;
    for (std::size_t n : cfg.ladder) {
        if (row.verdict == Verdict::failed) break;
        const auto t0 = std::chrono::steady_clock::now();
        ScalarField field;
        try {
            field = solve_one(cfg, n);
        } catch (const std::exception& e) {
            fail(fmt::format("solve N={}", n), e);
            break;
        }
        try {
            const auto est = lp::estimate_regularity(field, cfg.estimator.p, cfg.estimator.window,
                                                     cfg.estimator.method, cfg.estimator.params);
            Measurement m;
            m.n = n;
            m.s_star = est.s_star;
            m.stderr_ = est.stderr_;
            m.s_raw = est.s_raw;
            m.j_min = est.j_min;
            m.j_max = est.j_max;
            m.bv_flag = est.bv_flag;
            m.smooth_flag = est.smooth_flag;
            m.capped = est.capped;
            m.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.measurements.push_back(m);
            svg::Series s;
            s.label = fmt::format("N = {}", n);
            s.markers = true;
            for (const auto& b : est.bands) {
                s.x.push_back(b.j);
                s.y.push_back(b.norm > 0.0 ? std::log2(b.norm) : std::nan(""));
            }
            decay.push_back(std::move(s));
            if (!dir.empty()) {
                auto out = open_out(dir / fmt::format("bands_{}.csv", n));
                out << "j,norm,used\n";
                for (const auto& b : est.bands) out << fmt::format("{},{},{}\n", b.j, num(b.norm), b.used ? 1 : 0);
                if (n == cfg.ladder.back()) {
                    write_field(dir / fmt::format("field_{}.txt", n), field);
                    plot_field(field, dir / "solution.svg");
                }
            }
        } catch (const std::exception& e) {
            fail(fmt::format("estimate N={}", n), e);
        }
    }
    if (!dir.empty() && !decay.empty())
        svg::write(dir / "block_norms.svg",
                   svg::Plot{fmt::format("{}: block norm decay", cfg.id), "octave j", "log2 norm", decay});

    if (row.verdict != Verdict::failed && row.finest()) row.verdict = decide(row.predicted, *row.finest(), &row.tolerance);
    row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!dir.empty()) write_row(row, dir);
    return row;
}

std::vector<fs::path> collect_configs(const fs::path& pattern) {
    std::vector<fs::path> out;
    if (fs::is_directory(pattern)) {
        for (const auto& e : fs::directory_iterator(pattern))
            if (e.is_regular_file() && e.path().extension() == ".ini") out.push_back(e.path());
    } else {
        const fs::path parent = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
        const std::string glob = pattern.filename().string();
        if (fs::is_directory(parent))
            for (const auto& e : fs::directory_iterator(parent))
                if (e.is_regular_file() && fnmatch(glob.c_str(), e.path().filename().c_str(), 0) == 0)
                    out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void sort_rows(std::vector<ComparisonRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        return std::tie(a.example, a.id) < std::tie(b.example, b.id);
    });
}

}  // namespace

std::vector<ComparisonRow> run_suite(const fs::path& pattern, const fs::path& out_dir) {
    const auto files = collect_configs(pattern);
    std::vector<ExperimentConfig> cfgs;
    std::set<std::string> ids;
    for (const auto& f : files) {
        cfgs.push_back(load_config(f));
        if (!ids.insert(cfgs.back().id).second) throw InputError(fmt::format("duplicate experiment id '{}'", cfgs.back().id));
    }
    std::vector<ComparisonRow> rows(cfgs.size());
    parallel_for(cfgs.size(), [&](std::size_t i) { rows[i] = run_experiment(cfgs[i], out_dir); });
    sort_rows(rows);
    if (!out_dir.empty()) write_report(rows, out_dir);
    return rows;
}

void write_report(const std::vector<ComparisonRow>& unsorted, const fs::path& out_dir) {
    auto rows = unsorted;
    sort_rows(rows);
    fs::create_directories(out_dir);
    auto csv = open_out(out_dir / "report.csv");
    csv << "id,example,predicted,predicted_upper,clamped,general_s,profile_status,N,s_star,stderr,tolerance,verdict,"
           "failed_stage\n";
    for (const auto& r : rows) {
        const Measurement* m = r.finest();
        csv << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", quote(r.id), quote(r.example),
                           opt_num(r.predicted), opt_num(r.predicted_upper), r.clamped ? 1 : 0, opt_num(r.general_s),
                           quote(r.profile_status), m ? std::to_string(m->n) : "", m ? num(m->s_star) : "",
                           m ? num(m->stderr_) : "", num(r.tolerance), to_string(r.verdict), quote(r.failed_stage));
    }
    auto md = open_out(out_dir / "report.md");
    md << "# Experiment report\n\n";
    md << "| id | example | predicted s_max | measured s* (finest) | N | tol | verdict | runtime (s) |\n";
    md << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        const Measurement* m = r.finest();
        std::string pred = r.predicted ? fmt::format("{:.4f}", *r.predicted) : "none";
        if (r.predicted_upper) pred += fmt::format(" .. {:.4f}", *r.predicted_upper);
        if (r.clamped) pred += " (clamped)";
        md << fmt::format("| {} | {} | {} | {} | {} | {:.3f} | {} | {} |\n", r.id, r.example, pred,
                          m ? fmt::format("{:.4f} ± {:.4f}", m->s_star, m->stderr_) : "-",
                          m ? std::to_string(m->n) : "-", r.tolerance,
                          r.verdict == Verdict::failed ? fmt::format("failed ({})", r.failed_stage)
                                                       : to_string(r.verdict),
                          r.runtime_seconds > 0.0 ? fmt::format("{:.1f}", r.runtime_seconds) : "-");
    }
    bool any_failure = false;
    for (const auto& r : rows) any_failure |= !r.failure.empty();
    if (any_failure) {
        md << "\n## Failures\n\n";
        for (const auto& r : rows)
            if (!r.failure.empty()) md << fmt::format("- {} ({}): {}\n", r.id, r.failed_stage, r.failure);
    }
}

std::vector<ComparisonRow> read_rows(const fs::path& out_dir) {
    std::vector<ComparisonRow> rows;
    if (!fs::is_directory(out_dir)) throw InputError(fmt::format("'{}' is not a directory", out_dir.string()));
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(out_dir))
        if (e.is_directory() && fs::exists(e.path() / "row.csv")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        ComparisonRow r;
        std::ifstream in(d / "row.csv");
        std::string line;
        std::getline(in, line);
        std::map<std::string, std::string> kv;
        while (std::getline(in, line)) {
            const auto cells = split_csv(line);
            if (cells.size() >= 2) kv[cells[0]] = cells[1];
        }
        auto opt = [&](const std::string& k) -> std::optional<double> {
            if (kv[k].empty()) return std::nullopt;
            return parse_num(kv[k]);
        };
        try {
            r.id = kv["id"];
            r.example = kv["example"];
            r.predicted = opt("predicted");
            r.predicted_upper = opt("predicted_upper");
            r.clamped = kv["clamped"] == "1";
            r.regime = kv["regime"];
            r.prediction_reason = kv["prediction_reason"];
            r.general_s = opt("general_s");
            r.general_status = kv["general_status"];
            r.profile_status = kv["profile_status"];
            r.alpha = opt("alpha").value_or(0.0);
            r.beta = opt("beta").value_or(0.0);
            r.mu = opt("mu").value_or(0.0);
            r.lambda = opt("lambda").value_or(0.0);
            r.verdict = parse_verdict(kv["verdict"]);
            r.tolerance = opt("tolerance").value_or(0.0);
            r.failed_stage = kv["failed_stage"];
            r.failure = kv["failure"];
            std::ifstream min(d / "measurements.csv");
            std::getline(min, line);
            while (std::getline(min, line)) {
                const auto c = split_csv(line);
                if (c.size() < 9) continue;
                Measurement m;
                m.n = std::stoul(c[0]);
                m.s_star = parse_num(c[1]);
                m.stderr_ = parse_num(c[2]);
                m.s_raw = parse_num(c[3]);
                m.j_min = std::stoi(c[4]);
                m.j_max = std::stoi(c[5]);
                m.bv_flag = c[6] == "1";
                m.smooth_flag = c[7] == "1";
                m.capped = c[8] == "1";
                r.measurements.push_back(m);
            }
        } catch (const std::invalid_argument&) {
            throw InputError(fmt::format("malformed row in '{}'", d.string()));
        }
        rows.push_back(std::move(r));
    }
    sort_rows(rows);
    return rows;
}

int exit_code(const std::vector<ComparisonRow>& rows) {
    for (const auto& r : rows)
        if (r.verdict == Verdict::inconsistent || r.verdict == Verdict::failed) return 1;
    return 0;
}

}  // namespace velavg::experiments
