#pragma once
/// @file initial_data.hpp
/// @brief Initial data library for the PDE solvers.

#include <cstdint>
#include <string>

#include "velavg/field.hpp"

namespace velavg::pde {

/// Parameters of a named initial datum. Grid points are x_i = i L / N.
///   riemann            rho_left for x1 < x0, rho_right otherwise
///   sine               offset + amplitude sin(2 pi k s / L), s = x1 (1D) or x1 + x2 (2D)
///   barenblatt         self-similar solution of u_t = (sgn u |u|^(n+1) / (n+1))'' at time t0
///   diagonal-wave      offset + amplitude g(x1 + direction x2), g lacunary with exponent s0
///   random-bandlimited offset + Gaussian Fourier modes 1 <= |k| <= 2^j_cut, scaled to amplitude
///   constant           offset
struct DataSpec {
    std::string name = "riemann";
    double rho_left = 1.0;
    double rho_right = 0.0;
    double x0 = 0.5;
    double amplitude = 1.0;
    double offset = 0.0;
    double k = 1.0;
    double n = 2.0;
    double t0 = 0.01;
    double barenblatt_c = 0.0;  ///< 0 selects a support half-width of 0.15 L at t0
    int direction = 1;
    double s0 = 0.5;
    int j_lo = 1;
    int j_hi = 6;
    std::uint64_t seed = 1;
    int j_cut = 2;
};

ScalarField make_initial_data(const GridLayout& layout, const DataSpec& spec);

/// Barenblatt profile for u_t = Laplacian(sgn u |u|^(n+1) / (n+1)) in d dimensions,
/// centred at the origin: value at squared distance r2 and time t > 0.
double barenblatt(double n, int d, double t, double C, double r2);

/// Constant C giving support radius `radius` at time t.
double barenblatt_constant_for_radius(double n, int d, double t, double radius);

/// Barenblatt profile sampled on the grid, centred in the box.
ScalarField barenblatt_field(const GridLayout& layout, double n, double t, double C);

}  // namespace velavg::pde
