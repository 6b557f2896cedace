#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "velavg/config.hpp"
#include "velavg/error.hpp"

namespace velavg {
namespace {

using boost::property_tree::ptree;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T get(const ptree& t, const std::string& key, T fallback) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return fallback;
    const std::string s = trim(*v);
    if constexpr (std::is_same_v<T, std::string>) {
        return s;
    } else if constexpr (std::is_same_v<T, bool>) {
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw InputError(fmt::format("key '{}': expected a boolean, got '{}'", key, s));
    } else {
        std::istringstream in(s);
        T x{};
        in >> x;
        if (!in || !(in >> std::ws).eof()) throw InputError(fmt::format("key '{}': cannot parse '{}'", key, s));
        return x;
    }
}

double get_real(const ptree& t, const std::string& key, double fallback) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return fallback;
    const std::string s = trim(*v);
    if (s == "inf" || s == "infinity") return exponents::kInfinity;
    return get<double>(t, key, fallback);
}

std::vector<double> get_list(const ptree& t, const std::string& key) {
    std::vector<double> out;
    const auto v = t.get_optional<std::string>(key);
    if (!v) return out;
    std::istringstream in(*v);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError(fmt::format("key '{}': bad list entry '{}'", key, tok));
        }
    }
    return out;
}

std::vector<VelocityFunction> get_functions(const ptree& t, const std::string& key) {
    std::vector<VelocityFunction> out;
    const auto v = t.get_optional<std::string>(key);
    if (!v) return out;
    std::string item;
    std::istringstream in(*v);
    while (std::getline(in, item, '|')) out.push_back(VelocityFunction::parse(trim(item)));
    return out;
}

SymbolSpec symbol_from(const ptree& root) {
    const auto sec = root.get_child_optional("symbol");
    if (!sec) throw InputError("missing [symbol] section");
    const ptree& s = *sec;
    const int dim = get<int>(s, "dim", 1);
    auto a = get_functions(s, "convection");
    auto b = get_functions(s, "diffusion");
    if (a.empty()) a.assign(static_cast<std::size_t>(dim), VelocityFunction::zero());
    if (b.empty()) b.assign(static_cast<std::size_t>(dim * dim), VelocityFunction::zero());
    const auto iv = get_list(s, "interval");
    Interval I{-1.0, 1.0};
    if (!iv.empty()) {
        if (iv.size() != 2) throw InputError("key 'interval': expected two numbers");
        I = {iv[0], iv[1]};
    }
    std::optional<SymbolSpec::Degrees> deg;
    if (s.get_optional<std::string>("degree_convection") || s.get_optional<std::string>("degree_diffusion")) {
        SymbolSpec::Degrees d;
        d.convection = get_real(s, "degree_convection", d.convection);
        d.diffusion = get_real(s, "degree_diffusion", d.diffusion);
        deg = d;
    }
    return SymbolSpec(dim, std::move(a), std::move(b), I, get<bool>(s, "includes_time", true), deg,
                      get_real(s, "h_v", 1e-4));
}

ptree read_tree(const std::string& text) {
    ptree root;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw InputError(fmt::format("config syntax error: {}", e.message()));
    }
    return root;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source) {
    const ptree root = read_tree(text);
    ExperimentConfig c;
    c.source = source;
    c.id = get<std::string>(root, "id", "");
    if (c.id.empty()) throw InputError("missing key 'id'");
    c.example = get<std::string>(root, "example", "");
    if (c.example.empty()) throw InputError("missing key 'example'");
    c.params.ell = get_real(root, "ell", c.params.ell);
    c.params.m = get_real(root, "m", c.params.m);
    c.params.n = get_real(root, "n", c.params.n);
    c.params.alpha = get_real(root, "alpha", c.params.alpha);
    c.seed = get<std::uint64_t>(root, "seed", c.seed);
    c.L = get_real(root, "L", c.L);
    if (!(c.L > 0.0)) throw InputError("key 'L' must be positive");
    const auto ladder = get_list(root, "ladder");
    if (!ladder.empty()) {
        c.ladder.clear();
        for (double x : ladder) {
            if (x < 2 || x != std::floor(x) || !is_power_of_two(static_cast<std::size_t>(x)))
                throw InputError(fmt::format("ladder entry {} is not a power of two", x));
            if (!c.ladder.empty() && static_cast<std::size_t>(x) <= c.ladder.back())
                throw InputError("ladder must be strictly increasing");
            c.ladder.push_back(static_cast<std::size_t>(x));
        }
    }
    const auto problem = get<std::string>(root, "problem", "evolution");
    if (problem == "evolution") c.problem = ProblemKind::evolution;
    else if (problem == "elliptic") c.problem = ProblemKind::elliptic;
    else throw InputError(fmt::format("key 'problem': unknown value '{}'", problem));

    c.symbol = symbol_from(root);

    const ptree empty;
    const ptree& sch = root.get_child("scheme", empty);
    c.scheme.scheme = pde::parse_scheme(get<std::string>(sch, "scheme", "godunov"));
    c.scheme.cfl = get_real(sch, "cfl", c.scheme.cfl);
    c.scheme.diffusion_cfl = get_real(sch, "diffusion_cfl", c.scheme.diffusion_cfl);
    c.scheme.final_time = get_real(sch, "final_time", c.scheme.final_time);
    if (sch.get_optional<std::string>("dt")) c.scheme.dt = get_real(sch, "dt", 0.0);
    c.scheme.snapshot_times = get_list(sch, "snapshots");
    c.scheme.bgk_velocities = get<std::size_t>(sch, "bgk_velocities", 0);
    c.scheme.bgk_relaxation = get_real(sch, "bgk_relaxation", 0.0);

    const ptree& dat = root.get_child("data", empty);
    auto& d = c.data;
    d.name = get<std::string>(dat, "name", d.name);
    d.rho_left = get_real(dat, "rho_left", d.rho_left);
    d.rho_right = get_real(dat, "rho_right", d.rho_right);
    d.x0 = get_real(dat, "x0", d.x0);
    d.amplitude = get_real(dat, "amplitude", d.amplitude);
    d.offset = get_real(dat, "offset", d.offset);
    d.k = get_real(dat, "k", d.k);
    d.n = get_real(dat, "n", c.params.n);
    d.t0 = get_real(dat, "t0", d.t0);
    d.barenblatt_c = get_real(dat, "barenblatt_c", d.barenblatt_c);
    d.direction = get<int>(dat, "direction", d.direction);
    d.s0 = get_real(dat, "s0", d.s0);
    d.j_lo = get<int>(dat, "j_lo", d.j_lo);
    d.j_hi = get<int>(dat, "j_hi", d.j_hi);
    d.seed = get<std::uint64_t>(dat, "seed", c.seed);
    d.j_cut = get<int>(dat, "j_cut", d.j_cut);

    const ptree& ell = root.get_child("elliptic", empty);
    auto src = get_functions(ell, "source");
    if (src.size() > 1) throw InputError("key 'source': expected one function");
    if (!src.empty()) c.elliptic.source = src.front();
    c.elliptic.boundary = get<std::string>(ell, "boundary", c.elliptic.boundary);
    c.elliptic.amplitude = get_real(ell, "amplitude", c.elliptic.amplitude);
    c.elliptic.k = get_real(ell, "k", c.elliptic.k);
    c.elliptic.tolerance = get_real(ell, "tolerance", c.elliptic.tolerance);
    c.elliptic.max_iterations = get<std::size_t>(ell, "max_iterations", c.elliptic.max_iterations);
    if (c.elliptic.boundary != "zero" && c.elliptic.boundary != "sine" && c.elliptic.boundary != "harmonic")
        throw InputError(fmt::format("key 'boundary': unknown value '{}'", c.elliptic.boundary));

    const ptree& est = root.get_child("estimator", empty);
    c.estimator.p = get_real(est, "p", c.estimator.p);
    c.estimator.method = lp::parse_method(get<std::string>(est, "method", "lp"));
    const std::string default_window = c.problem == ProblemKind::elliptic ? "distance" : "plateau";
    c.estimator.window.kind = lp::parse_window_kind(get<std::string>(est, "window", default_window));
    c.estimator.params.cap = get_real(est, "cap", c.estimator.params.cap);
    c.estimator.params.trim = get_real(est, "trim", c.estimator.params.trim);

    const ptree& pr = root.get_child("prediction", empty);
    c.prediction.mode = get<std::string>(pr, "mode", c.prediction.mode);
    if (c.prediction.mode != "analytic" && c.prediction.mode != "fit")
        throw InputError(fmt::format("key 'mode': unknown value '{}'", c.prediction.mode));
    c.prediction.lemma.p = get_real(pr, "p", c.prediction.lemma.p);
    c.prediction.lemma.q = get_real(pr, "q", c.prediction.lemma.q);
    c.prediction.lemma.sigma = get_real(pr, "sigma", c.prediction.lemma.sigma);
    c.prediction.p_data = get_real(pr, "p_data", c.prediction.p_data);
    c.params.p_data = c.prediction.p_data;
    c.prediction.delta_lo = get<int>(pr, "delta_lo", c.prediction.delta_lo);
    c.prediction.delta_hi = get<int>(pr, "delta_hi", c.prediction.delta_hi);
    if (c.prediction.delta_lo >= c.prediction.delta_hi) throw InputError("delta_lo must be below delta_hi");
    const auto J = get_list(pr, "J");
    if (!J.empty()) c.prediction.J = J;

    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

SymbolSpec load_symbol(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return symbol_from(read_tree(ss.str()));
}

}  // namespace velavg
