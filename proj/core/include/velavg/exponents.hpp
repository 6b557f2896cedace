#pragma once
/// @file exponents.hpp
/// @brief Interpolation exponents of the averaging lemmas and predicted regularity.

#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "velavg/degeneracy.hpp"

namespace velavg::exponents {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Lemma inputs. p in (1, 2], q in [1, p]; q = 1 means q' = infinity.
struct LemmaParams {
    double alpha = 1.0;
    double p = 2.0;
    double q = 1.0;
    double N = 1.0;      ///< order of the source term (homogeneous lemma)
    double sigma = 0.0;  ///< regularity of the data in x
    double k = 1.0;      ///< homogeneity degree of the symbol
    double eta = 0.0;    ///< derivatives lost by the source
    double mu = 0.0;     ///< exponent of sup |L_v| (improved lemma)
};

enum class PredictionMode { homogeneous, improved, general };
enum class PredictionStatus { ok, no_gain, no_prediction };

std::string to_string(PredictionMode m);
std::string to_string(PredictionStatus s);

struct RegularityPrediction {
    double theta = 0.0;
    double s_pre = 0.0;   ///< one application of the lemma
    double s_boot = 0.0;  ///< bootstrap fixed point
    double r = 2.0;       ///< integrability of the average
    double gain = 0.0;
    PredictionMode mode = PredictionMode::homogeneous;
    PredictionStatus status = PredictionStatus::ok;
    std::string note;
};

/// 1/p' = 1 - 1/p (0 for p = 1, 1 for p = infinity).
double inverse_conjugate(double p);

RegularityPrediction theta_homogeneous(const LemmaParams& params);
RegularityPrediction theta_improved(const LemmaParams& params);
/// General lemma driven by a degeneracy profile; uses params.p, q and sigma.
RegularityPrediction predict_general(const degeneracy::DegeneracyProfile& profile, const LemmaParams& params);

/// Fixed point of s -> (1 - theta) s / 2 + theta gain started from sigma0; iterates to
/// a step below 1e-14 and checks the result against 2 theta gain / (1 + theta).
double bootstrap_fixed_point(double theta, double gain, double sigma0 = 0.0);

/// Parameters of the worked examples. p_data is the integrability of the initial data.
struct ExampleParams {
    double ell = 1.0;
    double m = 2.0;
    double n = 2.0;
    double alpha = 0.5;
    double p_data = kInfinity;
};

struct PredictionRecord {
    std::string example;
    std::optional<double> s_max;  ///< nullopt means no prediction
    std::optional<double> s_upper;  ///< upper end when only an interval is known
    bool clamped = false;
    bool interval = false;
    std::string regime;
    std::string reason;
};

/// Known example ids: burgers, twod-flux, sine-cubic, porous, convdiff,
/// twod-convdiff, fully-degenerate, elliptic.
PredictionRecord paper_prediction(std::string_view example_id, const ExampleParams& params);

}  // namespace velavg::exponents
