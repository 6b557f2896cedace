#pragma once
// Internal: monotone numerical fluxes shared by the solvers and the entropy
// production diagnostics.

#include <cstddef>
#include <vector>

#include "velavg/pde.hpp"
#include "velavg/symbol.hpp"
#include "velavg/velocity_function.hpp"

namespace velavg::pde::detail {

/// Velocity nodes of the kinetic scheme: m midpoints on [min(0, lo), max(0, hi)].
struct KineticGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t m = 0;
    double dv() const { return (hi - lo) / static_cast<double>(m); }
    double at(std::size_t k) const { return lo + (static_cast<double>(k) + 0.5) * dv(); }
};

KineticGrid kinetic_grid(double data_min, double data_max, std::size_t m);

/// Two-point monotone flux F(u, w) for one flux component A = int a.
class NumericalFlux {
public:
    NumericalFlux(const VelocityFunction& a, Scheme scheme, double data_min, double data_max,
                  const KineticGrid* kgrid = nullptr);

    bool active() const { return active_; }
    double primitive(double u) const { return a_.antiderivative(u); }
    double operator()(double u, double w) const;
    /// Godunov and Lax-Friedrichs only need A at both states; callers may cache it.
    bool uses_primitive() const { return scheme_ == Scheme::godunov || scheme_ == Scheme::lax_friedrichs; }
    double from_primitive(double u, double w, double Au, double Aw) const;
    /// max |a| over the data range (kinetic: over the velocity nodes).
    double max_speed() const { return max_speed_; }

private:
    double positive_part(double u) const;  // int_0^u max(a, 0)
    double kinetic_part(double u, bool positive) const;

    VelocityFunction a_;
    Scheme scheme_;
    bool active_ = false;
    std::vector<double> zeros_;
    std::vector<double> zero_values_;
    double max_speed_ = 0.0;
    // kinetic prefix sums of a^+ dv and a^- dv over the velocity nodes
    KineticGrid kgrid_{};
    std::vector<double> prefix_pos_, prefix_neg_;
};

/// Full kinetic state f(x, v) for BGK with a finite relaxation time: upwind
/// transport on every velocity node, then relaxation towards chi_rho.
class KineticRelaxation {
public:
    KineticRelaxation(const SymbolSpec& flux, const GridLayout& g, const KineticGrid& kg);
    std::vector<double> equilibrium(const std::vector<double>& rho) const;
    /// Advance f by dt with relaxation time eps and write the new density.
    void step(std::vector<double>& f, std::vector<double>& rho, double dt, double eps) const;

private:
    GridLayout g_;
    KineticGrid kg_;
    std::vector<std::vector<double>> speed_;  // [axis][node]
    mutable std::vector<double> scratch_;
};

/// max |f| over [lo, hi] from dense sampling (endpoints included).
double sampled_max_abs(const VelocityFunction& f, double lo, double hi);

}  // namespace velavg::pde::detail
