#include <cmath>
#include <random>

#include <doctest.h>

#include "velavg/regression.hpp"

using namespace velavg;

TEST_CASE("exact line is recovered") {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
        x.push_back({static_cast<double>(i)});
        y.push_back(3.0 - 0.5 * i);
    }
    const auto fit = least_squares(x, y);
    CHECK(fit.coef[0] == doctest::Approx(3.0));
    CHECK(fit.coef[1] == doctest::Approx(-0.5));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.stderr_[1] < 1e-12);
    CHECK(fit.points_used == 10);
}

TEST_CASE("two regressors") {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j) {
            x.push_back({double(i), double(j)});
            y.push_back(1.0 + 2.0 * i - 3.0 * j);
        }
    const auto fit = least_squares(x, y);
    CHECK(fit.coef[0] == doctest::Approx(1.0));
    CHECK(fit.coef[1] == doctest::Approx(2.0));
    CHECK(fit.coef[2] == doctest::Approx(-3.0));
}

TEST_CASE("standard error matches the textbook formula for noisy data") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    const int n = 40;
    for (int i = 0; i < n; ++i) {
        x.push_back({double(i)});
        y.push_back(0.3 * i + noise(rng));
    }
    const auto fit = least_squares(x, y);
    double sxx = 0.0, mean = (n - 1) / 2.0, rss = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (i - mean) * (i - mean);
        const double r = y[i] - fit.coef[0] - fit.coef[1] * i;
        rss += r * r;
    }
    CHECK(fit.stderr_[1] == doctest::Approx(std::sqrt(rss / (n - 2) / sxx)).epsilon(1e-9));
    CHECK(fit.coef[1] == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("trimming removes an outlier") {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back({double(i)});
        y.push_back(2.0 * i + 1.0 + (i % 2 ? 1e-3 : -1e-3));
    }
    y[7] += 50.0;
    const auto plain = least_squares(x, y);
    const auto trimmed = trimmed_least_squares(x, y, 0.1);
    CHECK(std::fabs(plain.coef[1] - 2.0) > 1e-2);
    CHECK(trimmed.coef[1] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(trimmed.points_used < 20);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS(least_squares({{1.0}}, {1.0}));
    CHECK_THROWS(least_squares({{1.0}, {1.0}, {1.0}}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(least_squares({{1.0}, {2.0}}, {1.0}));
}
