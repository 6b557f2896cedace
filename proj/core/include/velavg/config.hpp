#pragma once
/// @file config.hpp
/// @brief Experiment configuration files.
///
/// Flat INI: top-level keys (id, example, ell, m, n, alpha, seed, ladder, L,
/// problem) followed by [symbol], [scheme], [data], [estimator], [prediction]
/// and, for elliptic problems, [elliptic]. Lists are whitespace separated;
/// per-component function lists use '|'.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "velavg/exponents.hpp"
#include "velavg/initial_data.hpp"
#include "velavg/littlewood_paley.hpp"
#include "velavg/pde.hpp"
#include "velavg/symbol.hpp"

namespace velavg {

enum class ProblemKind { evolution, elliptic };

struct EllipticSettings {
    VelocityFunction source = VelocityFunction::zero();
    std::string boundary = "zero";  ///< zero, sine, harmonic
    double amplitude = 1.0;
    double k = 1.0;
    double tolerance = 1e-8;
    std::size_t max_iterations = 500;
};

struct PredictionSettings {
    std::string mode = "analytic";  ///< analytic or fit
    exponents::LemmaParams lemma{};  ///< p, q, sigma for predict_general
    double p_data = exponents::kInfinity;
    int delta_lo = -10;  ///< fit grid exponents (base 2)
    int delta_hi = -3;
    std::vector<double> J{1.0, 4.0, 16.0, 64.0};
};

struct EstimatorSettings {
    double p = 1.0;
    lp::Method method = lp::Method::lp;
    lp::Window window{};
    lp::EstimatorParams params{};
};

struct ExperimentConfig {
    std::string id;
    std::string example;
    exponents::ExampleParams params{};
    std::uint64_t seed = 1;
    std::vector<std::size_t> ladder{1024};
    double L = 1.0;
    ProblemKind problem = ProblemKind::evolution;
    SymbolSpec symbol;
    pde::SchemeConfig scheme{};
    pde::DataSpec data{};
    EllipticSettings elliptic{};
    EstimatorSettings estimator{};
    PredictionSettings prediction{};
    std::filesystem::path source;
};

/// Throws InputError naming the offending key.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& source = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Only the [symbol] section of a config file.
SymbolSpec load_symbol(const std::filesystem::path& path);

}  // namespace velavg
