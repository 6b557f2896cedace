#pragma once
/// @file elliptic.hpp
/// @brief Degenerate elliptic Dirichlet problems -sum d_j d_k B_jk(rho) = S(rho)
/// on the box [0, L]^d, solved by pseudo-transient continuation.

#include <cstddef>
#include <functional>
#include <vector>

#include "velavg/field.hpp"
#include "velavg/symbol.hpp"
#include "velavg/velocity_function.hpp"

namespace velavg::pde {

struct EllipticProblem {
    SymbolSpec spec;         ///< diffusion matrix b = B'; convection must vanish
    VelocityFunction source;  ///< S(rho)
    int dim = 1;
    std::size_t n = 64;  ///< cells per axis; nodes are x_i = i L / n, i = 0..n
    double L = 1.0;
    /// Dirichlet data g(x1, x2); x2 is 0 in 1D.
    std::function<double(double, double)> boundary = [](double, double) { return 0.0; };
};

struct EllipticOptions {
    double tolerance = 1e-8;  ///< discrete L2 residual (h^d weighted)
    std::size_t max_iterations = 500;
    double initial_dtau = 0.0;  ///< 0 picks h^2
    double max_growth = 10.0;
    double max_dtau = 1e12;
    /// Start from the interpolated solution on n/2 cells, recursively down to this
    /// many cells per axis; 0 starts from zero interior values.
    std::size_t coarsest = 16;
};

struct EllipticSolution {
    int dim = 1;
    std::size_t n = 0;
    double L = 1.0;
    std::vector<double> nodes;  ///< (n+1)^d values, row-major
    std::vector<double> residual_history;  ///< finest grid only
    std::size_t iterations = 0;            ///< finest grid only

    double h() const { return L / static_cast<double>(n); }
    double at(std::size_t i, std::size_t j = 0) const { return nodes[dim == 1 ? i : i * (n + 1) + j]; }
    /// Node values with the last node of every axis dropped, as a field on GridLayout(dim, n, L).
    ScalarField to_field(const std::string& label = "elliptic") const;
};

/// Throws ConvergenceError (with the residual history) when the budget runs out.
EllipticSolution solve_elliptic_degenerate(const EllipticProblem& problem, const EllipticOptions& options = {});

}  // namespace velavg::pde
