#pragma once
/// @file degeneracy.hpp
/// @brief Measure of near-degenerate velocity sets and power-law fits of it.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "velavg/symbol.hpp"

namespace velavg::degeneracy {

struct SamplingParams {
    std::size_t n_samples = 1u << 16;   ///< midpoint samples on the velocity interval (>= 256)
    std::size_t sphere_samples = 256;   ///< coarse directions on the unit sphere (>= 64)
    int refine_levels = 24;             ///< step halvings of the local search around the argmax
};

/// sup over |(tau, xi)| = J of the measure of {v : |L| <= delta}, with the maximiser
/// and sup |dL/dv| over the set at that maximiser.
struct OmegaMeasurement {
    double J = 1.0;
    double delta = 0.0;
    double measure = 0.0;
    double sup_symbol_v = 0.0;
    FrequencyPoint argmax{};
    std::size_t samples_in_set = 0;
};

/// Measure of {v in I : |L(tau, xi, v)| <= delta} from n_samples midpoint samples,
/// with linear interpolation of the level crossing between neighbouring samples.
double omega_set_measure(const SymbolSpec& spec, const FrequencyPoint& fp, double delta, std::size_t n_samples);

/// Tabulates the coefficients once and measures velocity sets for many frequencies.
class SetMeasurer {
public:
    SetMeasurer(const SymbolSpec& spec, std::size_t n_samples);
    ~SetMeasurer();
    SetMeasurer(SetMeasurer&&) noexcept;
    SetMeasurer& operator=(SetMeasurer&&) noexcept;

    /// Measure of {v : |L| <= delta}.
    double measure(const FrequencyPoint& fp, double delta) const;
    /// Measure of {v : lo < |L| <= hi} for lo < hi.
    double shell_measure(const FrequencyPoint& fp, double lo, double hi) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Single-radius, single-delta version of omega_sup_grid.
OmegaMeasurement omega_sup(const SymbolSpec& spec, double J, double delta, const SamplingParams& params = {});

/// One OmegaMeasurement per delta (returned in the input order). The deltas share
/// the coarse direction pass; measures are nondecreasing in delta.
std::vector<OmegaMeasurement> omega_sup_grid(const SymbolSpec& spec, double J, const std::vector<double>& deltas,
                                             const SamplingParams& params = {});

enum class ProfileStatus {
    fitted,                   ///< power-law regression on measured data
    analytic,                 ///< closed form for a recognised family
    degenerate,               ///< the set does not shrink with delta
    trivially_nondegenerate,  ///< the set is empty at every grid point
};

std::string to_string(ProfileStatus s);

/// Exponents of omega(J; delta) ~ (delta / J^beta)^alpha and
/// sup |L_v| ~ J^(beta lambda) delta^mu, with regression diagnostics.
struct DegeneracyProfile {
    double alpha = 0.0;
    double alpha_stderr = 0.0;
    double beta = 1.0;
    double beta_stderr = 0.0;
    double mu = 0.0;
    double mu_stderr = 0.0;
    double lambda = 0.0;
    double lambda_stderr = 0.0;
    double r_squared_measure = 1.0;
    double r_squared_sup = 1.0;
    ProfileStatus status = ProfileStatus::fitted;
    bool degenerate_flag = false;
    bool mu_clamped = false;
    std::string note;
    std::vector<OmegaMeasurement> grid;  ///< J-major, delta-minor
    std::vector<bool> used_in_fit;       ///< parallel to grid

    bool trivially_nondegenerate() const { return status == ProfileStatus::trivially_nondegenerate; }
};

/// {2^lo, 2^(lo+1), ..., 2^hi}.
std::vector<double> dyadic_grid(int lo_exponent, int hi_exponent);

/// Regresses log(measure) on log(delta) and log(J). A singleton J grid fits only the
/// delta exponent and takes beta from the declared (or implied) homogeneity degree.
DegeneracyProfile fit_degeneracy(const SymbolSpec& spec, const std::vector<double>& delta_grid,
                                 const std::vector<double>& J_grid, const SamplingParams& params = {});

/// Closed-form profile for power-law convection / diffusion families, the 2D flux
/// pairs, the sine/cubic flux and the rank-one 2D diffusion family. Throws
/// InputError when the symbol is not recognised.
DegeneracyProfile analytic_profile(const SymbolSpec& spec);

}  // namespace velavg::degeneracy
