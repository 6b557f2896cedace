#pragma once
/// @file experiments.hpp
/// @brief Experiment pipeline: degeneracy profile, predicted exponent, PDE solve
/// over a resolution ladder, measured exponent, verdict.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "velavg/config.hpp"

namespace velavg::experiments {

enum class Verdict { consistent, inconsistent, no_prediction, failed };
std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

/// Fixed slack of the verdict tolerance 2 stderr + kVerdictSlack.
inline constexpr double kVerdictSlack = 0.05;

struct Measurement {
    std::size_t n = 0;
    double s_star = 0.0;
    double stderr_ = 0.0;
    double s_raw = 0.0;
    int j_min = 0;
    int j_max = 0;
    bool bv_flag = false;
    bool smooth_flag = false;
    bool capped = false;
    double runtime_seconds = 0.0;  ///< not written to CSV
};

struct ComparisonRow {
    std::string id;
    std::string example;
    std::optional<double> predicted;        ///< open lower bound on s_star being tested
    std::optional<double> predicted_upper;  ///< set when only an interval is known
    bool clamped = false;
    std::string regime;
    std::string prediction_reason;
    std::optional<double> general_s;  ///< bootstrap exponent from the general lemma
    std::string general_status;
    std::string profile_status;
    double alpha = 0.0, beta = 0.0, mu = 0.0, lambda = 0.0;
    std::vector<Measurement> measurements;
    Verdict verdict = Verdict::no_prediction;
    double tolerance = 0.0;
    std::string failed_stage;
    std::string failure;
    double runtime_seconds = 0.0;

    const Measurement* finest() const { return measurements.empty() ? nullptr : &measurements.back(); }
};

/// consistent iff s_star >= predicted - (2 stderr + kVerdictSlack).
Verdict decide(const std::optional<double>& predicted, const Measurement& m, double* tolerance = nullptr);

/// Runs every stage; a failing stage is recorded in the row and later stages are skipped.
/// Artifacts go to out_dir / cfg.id when out_dir is not empty.
ComparisonRow run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Config files matching `pattern`: a directory (all *.ini inside) or a path whose
/// file name contains shell wildcards. Sorted by path.
std::vector<std::filesystem::path> collect_configs(const std::filesystem::path& pattern);

/// Runs all configs (ids must be unique), writes the report and returns rows sorted
/// by example id, then id.
std::vector<ComparisonRow> run_suite(const std::filesystem::path& pattern, const std::filesystem::path& out_dir);

/// report.csv and report.md in out_dir.
void write_report(const std::vector<ComparisonRow>& rows, const std::filesystem::path& out_dir);

/// Rows stored by run_experiment under out_dir/*/row.csv.
std::vector<ComparisonRow> read_rows(const std::filesystem::path& out_dir);

/// Nonzero when any verdict is inconsistent or failed.
int exit_code(const std::vector<ComparisonRow>& rows);

}  // namespace velavg::experiments
