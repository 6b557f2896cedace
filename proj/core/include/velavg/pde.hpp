#pragma once
/// @file pde.hpp
/// @brief Explicit finite-volume solvers for scalar conservation laws and
/// degenerate convection-diffusion, a kinetic (BGK) scheme and the discrete
/// kinetic entropy production.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "velavg/field.hpp"
#include "velavg/symbol.hpp"

namespace velavg::pde {

enum class Scheme { godunov, engquist_osher, lax_friedrichs, kinetic_bgk };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct SchemeConfig {
    Scheme scheme = Scheme::godunov;
    double cfl = 0.45;            ///< dt * sum_j max|a_j| / dx
    double diffusion_cfl = 0.25;  ///< dt * max eig(b) / dx^2
    double final_time = 0.5;
    std::optional<double> dt;     ///< fixed step, refused when it breaks the bounds above
    /// Output times in (0, final_time]; the initial and final states are always kept.
    std::vector<double> snapshot_times;
    /// Also keep the state one step after each snapshot (needed for entropy production).
    bool store_successors = false;
    std::size_t bgk_velocities = 0;  ///< kinetic velocity nodes; 0 picks 2N
    double bgk_relaxation = 0.0;     ///< must not exceed dt; 0 means instantaneous
    std::size_t max_steps = 100'000'000;
};

struct Snapshot {
    double t = 0.0;
    std::size_t step = 0;
    ScalarField field;
    double mass = 0.0;
    std::optional<ScalarField> successor;  ///< state one step later
    double successor_dt = 0.0;
};

struct Trajectory {
    Scheme scheme = Scheme::godunov;
    GridLayout layout;
    std::vector<Snapshot> snapshots;
    double dt_max = 0.0;  ///< stability bound the steps were chosen under
    std::size_t steps = 0;
    double data_min = 0.0;
    double data_max = 0.0;
    double mass_scale = 1.0;  ///< max(|initial mass|, ||rho0||_L1), reference for drift
    std::size_t bgk_velocities = 0;

    const Snapshot& final_snapshot() const { return snapshots.back(); }
    /// max over snapshots of |mass - initial mass| / mass_scale.
    double relative_mass_drift() const;
};

/// rho_t + div A(rho) = 0 with A_j the antiderivatives of the symbol's a_j.
Trajectory solve_conservation_law(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg);

/// rho_t + div A(rho) = sum_jk d_j d_k B_jk(rho) with B_jk the antiderivatives of b_jk.
Trajectory solve_convection_diffusion(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg);

/// Transport f_t + a(v).grad f = 0 on a velocity grid followed by projection onto
/// the equilibrium chi_rho(v); returns the macroscopic densities.
Trajectory solve_kinetic_bgk(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg);

/// Equilibrium chi_rho(v): 1 for 0 < v <= rho, -1 for rho <= v < 0, else 0.
double chi(double rho, double v);

/// Kinetic entropy production m(t, x, v) on the Kruzkov grid (33 points spanning
/// the data range), one slab per snapshot that carries a successor.
struct EntropyProductionField {
    GridLayout layout;
    std::vector<double> v;      ///< Kruzkov parameters
    std::vector<double> times;  ///< time of each slab
    std::vector<double> dts;    ///< step of each slab
    std::vector<double> values;  ///< [slab][v][x]
    double min_value = 0.0;
    double roundoff_floor = 0.0;  ///< size of m attributable to floating point error
    double total_mass = 0.0;      ///< sum of m dx dv dt over all slabs

    std::size_t slabs() const { return times.size(); }
    const double* slab(std::size_t s, std::size_t iv) const {
        return values.data() + (s * v.size() + iv) * layout.size();
    }
    /// sum_x m dx over a range of cells [i0, i1) (1D) for one slab and Kruzkov index.
    double column_mass(std::size_t s, std::size_t iv, std::size_t i0, std::size_t i1) const;
};

EntropyProductionField entropy_production(const Trajectory& traj, const SymbolSpec& flux,
                                          std::size_t kruzkov_points = 33);

/// Stable step for the given data range and scheme settings.
double stable_time_step(const SymbolSpec& flux, const GridLayout& layout, double data_min, double data_max,
                        const SchemeConfig& cfg);

}  // namespace velavg::pde
