#pragma once
/// @file multiplier.hpp
/// @brief Symbol truncation psi(L/delta) applied to (x, v) fields and the
/// averaged-multiplier bound check.

#include <cstdint>
#include <span>
#include <vector>

#include "velavg/field.hpp"
#include "velavg/symbol.hpp"
#include "velavg/velocity_function.hpp"

namespace velavg::lp {

/// Radial bump on the complex plane: disc (1 on |z| <= 1, 0 beyond 2) or
/// annulus (supported in 1/2 < |z| < 2, equal to 1 at |z| = 1).
enum class Bump { disc, annulus };

double bump_value(Bump b, double abs_z);

/// Applies psi(L(i(tau, xi), v) / delta) slice by slice in v. Space frequencies
/// are xi = k / L; with a time axis the first axis contributes tau = k1 / L.
XVField truncation_apply(const XVField& f, const SymbolSpec& spec, double delta, Bump bump);

struct MultiplierRow {
    double delta = 0.0;
    double omega_sup = 0.0;   ///< sup over nonzero grid frequencies of |Omega_psi(xi; delta)|
    double max_ratio = 0.0;   ///< max over the battery of the normalised average
    bool uninformative = false;  ///< omega_sup covers at least 90% of the interval
};

struct MultiplierParams {
    std::size_t omega_samples = 1u << 14;  ///< velocity samples for |Omega_psi|
};

/// For each delta: max over fields of
///   || int psi(L/delta) f phi dv ||_{L^p_x} / ( sup_xi |Omega_psi(xi; delta)|^(1/p') ||f||_{L^p_{x,v}} )
/// computed on the x-mean-free part of each field.
std::vector<MultiplierRow> verify_averaged_multiplier(std::span<const XVField> battery, const SymbolSpec& spec,
                                                      const std::vector<double>& deltas, double p,
                                                      const VelocityFunction& weight, Bump bump,
                                                      const MultiplierParams& params = {});

/// Deterministic pseudo-random field: independent Gaussian Fourier coefficients for
/// 1 <= |k| <= k_cut (per axis in 2D) at every velocity node.
XVField random_xv_field(const GridLayout& layout, const VelocityGrid& vgrid, std::uint64_t seed, int k_cut);

}  // namespace velavg::lp
