#include "velavg/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "velavg/error.hpp"

namespace velavg {

LinearFit least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (x.size() != n || n == 0) throw InputError("regression: empty or mismatched data");
    const std::size_t k = x.front().size();
    const std::size_t p = k + 1;
    if (n < p) throw InputError("regression: fewer observations than parameters");

    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd Y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i].size() != k) throw InputError("regression: ragged design matrix");
        const auto r = static_cast<Eigen::Index>(i);
        X(r, 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) X(r, static_cast<Eigen::Index>(j + 1)) = x[i][j];
        Y(r) = y[i];
    }
    const Eigen::MatrixXd XtX = X.transpose() * X;
    const auto qr = XtX.colPivHouseholderQr();
    if (qr.rank() < static_cast<Eigen::Index>(p)) throw InputError("regression: rank-deficient design");
    const Eigen::VectorXd beta = qr.solve(X.transpose() * Y);
    const Eigen::VectorXd resid = Y - X * beta;

    const double rss = resid.squaredNorm();
    const double mean = Y.mean();
    const double tss = (Y.array() - mean).square().sum();
    const double dof = static_cast<double>(n) - static_cast<double>(p);
    const double sigma2 = dof > 0 ? rss / dof : 0.0;
    const Eigen::MatrixXd cov = sigma2 * qr.inverse();

    LinearFit fit;
    fit.coef.assign(beta.data(), beta.data() + p);
    fit.covariance.resize(p * p);
    fit.stderr_.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j)
            fit.covariance[i * p + j] = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        fit.stderr_[i] = std::sqrt(std::max(0.0, fit.covariance[i * p + i]));
    }
    fit.r_squared = tss > 0 ? 1.0 - rss / tss : 1.0;
    fit.points_used = n;
    return fit;
}

LinearFit trimmed_least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                double trim) {
    LinearFit full = least_squares(x, y);
    const std::size_t n = y.size();
    const std::size_t p = full.coef.size();
    const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(n)));
    if (cut == 0 || n - 2 * cut < p + 1) return full;

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pred = full.coef[0];
        for (std::size_t j = 0; j + 1 < p; ++j) pred += full.coef[j + 1] * x[i][j];
        resid[i] = y[i] - pred;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return resid[a] < resid[b]; });
    std::vector<std::size_t> keep(order.begin() + static_cast<std::ptrdiff_t>(cut),
                                  order.end() - static_cast<std::ptrdiff_t>(cut));
    std::sort(keep.begin(), keep.end());

    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (auto i : keep) {
        xs.push_back(x[i]);
        ys.push_back(y[i]);
    }
    try {
        return least_squares(xs, ys);
    } catch (const InputError&) {
        return full;
    }
}

}  // namespace velavg
