#pragma once
/// @file littlewood_paley.hpp
/// @brief Dyadic frequency decomposition and Besov-type regularity estimates.

#include <string>
#include <vector>

#include "velavg/field.hpp"

namespace velavg::lp {

/// Radial cut-off: 1 on [0, 1], cos^2(pi/2 log2 r) on (1, 2), 0 beyond.
double phi(double r);
/// Weight of band j at radius r; band j_last collects everything above 2^(j_last-1).
double band_weight(int j, double r, int j_last);
/// Index of the last band that contains grid frequencies.
int nyquist_octave(const GridLayout& layout);

struct Decomposition {
    std::vector<ScalarField> blocks;  ///< blocks[j], j = 0..j_max; they sum to the input
    int j_max = 0;
    std::vector<std::string> warnings;
};

/// Splits f into dyadic blocks 0..j_max (truncated to the Nyquist octave).
Decomposition lp_decompose(const ScalarField& f, int j_max);

enum class WindowKind { none, plateau, distance };

/// Spatial cut-off applied before taking norms. `plateau` equals 1 on the central
/// plateau_fraction of the box and falls smoothly to 0 over ramp_fraction on each
/// side. `distance` vanishes within epsilon/2 of the box boundary and equals 1
/// beyond epsilon = epsilon_fraction * L.
struct Window {
    WindowKind kind = WindowKind::plateau;
    double plateau_fraction = 0.5;
    double ramp_fraction = 0.125;
    double epsilon_fraction = 0.125;
};

WindowKind parse_window_kind(const std::string& name);
std::string to_string(WindowKind k);

/// Window values on the layout (all ones for WindowKind::none).
ScalarField window_field(const GridLayout& layout, const Window& w);

struct BandNorm {
    int j = 0;
    double norm = 0.0;
    bool used = false;  ///< part of the regression window
};

/// ||window * block_j||_{L^p} for every block; window may be null.
std::vector<BandNorm> block_norms(const std::vector<ScalarField>& blocks, double p, const ScalarField* window);

enum class Method { lp, increments };
Method parse_method(const std::string& name);
std::string to_string(Method m);

struct EstimatorParams {
    double cap = 1.05;          ///< s_star is capped at this value
    double trim = 0.1;          ///< residual trimming fraction
    int min_bands = 4;          ///< fewer usable bands is insufficient resolution
    double bv_threshold = 0.9;  ///< s_raw at or above this sets the BV flag
    double smooth_threshold = 2.0;  ///< s_raw above this sets the smooth flag
};

struct RegularityEstimate {
    double s_star = 0.0;
    double s_raw = 0.0;
    double stderr_ = 0.0;
    double r_squared = 1.0;
    int j_min = 0;
    int j_max = 0;
    Method method = Method::lp;
    double p = 1.0;
    bool bv_flag = false;
    bool smooth_flag = false;
    bool capped = false;
    std::vector<BandNorm> bands;  ///< band norms (lp) or increment norms indexed by octave (increments)
    std::vector<std::string> warnings;
};

/// Decay rate of windowed dyadic block norms (lp) or of windowed increments
/// ||f(. + h) - f|| with h = 2^-j L (increments). The top two octaves and bands
/// below 1e3 eps ||window f|| are left out of the fit.
RegularityEstimate estimate_regularity(const ScalarField& f, double p, const Window& window, Method method,
                                       const EstimatorParams& params = {});

}  // namespace velavg::lp
