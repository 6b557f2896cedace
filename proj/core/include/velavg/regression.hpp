#pragma once
/// @file regression.hpp
/// @brief Ordinary and residual-trimmed least squares with an intercept.

#include <cstddef>
#include <vector>

namespace velavg {

struct LinearFit {
    /// coef[0] is the intercept, coef[k] multiplies regressor k-1.
    std::vector<double> coef;
    std::vector<double> stderr_;
    /// Row-major covariance of coef.
    std::vector<double> covariance;
    double r_squared = 0.0;
    std::size_t points_used = 0;

    double cov(std::size_t i, std::size_t j) const { return covariance[i * coef.size() + j]; }
};

/// y ~ c0 + sum_k c_k x_k. Each row of `x` holds the regressors of one observation.
LinearFit least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y);

/// Fits once, drops floor(trim * n) observations from each end of the sorted
/// signed residuals and refits. Falls back to the untrimmed fit when too few
/// observations would remain.
LinearFit trimmed_least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                double trim = 0.1);

}  // namespace velavg
