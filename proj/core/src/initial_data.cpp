#include "velavg/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "velavg/error.hpp"

namespace velavg::pde {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BarenblattShape {
    double m, k, kappa;
};

BarenblattShape shape(double n, int d) {
    if (!(n > 0.0)) throw InputError("Barenblatt exponent must be positive");
    const double m = n + 1.0;
    const double k = d / (d * (m - 1.0) + 2.0);
    const double kappa = k * (m - 1.0) / (2.0 * m * d);
    return {m, k, kappa};
}

}  // namespace

double barenblatt(double n, int d, double t, double C, double r2) {
    if (!(t > 0.0)) throw InputError("Barenblatt time must be positive");
    const auto s = shape(n, d);
    const double tau = t / s.m;  // rescales (u^m)/m to u^m
    const double inner = C - s.kappa * r2 * std::pow(tau, -2.0 * s.k / d);
    if (inner <= 0.0) return 0.0;
    return std::pow(tau, -s.k) * std::pow(inner, 1.0 / (s.m - 1.0));
}

double barenblatt_constant_for_radius(double n, int d, double t, double radius) {
    const auto s = shape(n, d);
    const double tau = t / s.m;
    return s.kappa * radius * radius * std::pow(tau, -2.0 * s.k / d);
}

ScalarField barenblatt_field(const GridLayout& g, double n, double t, double C) {
    ScalarField f(g, fmt::format("barenblatt n={} t={}", n, t));
    const double c = 0.5 * g.L;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r2 = 0.0;
        if (g.dim == 1) {
            const double x = static_cast<double>(i) * g.dx() - c;
            r2 = x * x;
        } else {
            const double x = static_cast<double>(i / g.n) * g.dx() - c;
            const double y = static_cast<double>(i % g.n) * g.dx() - c;
            r2 = x * x + y * y;
        }
        f.values[i] = barenblatt(n, g.dim, t, C, r2);
    }
    return f;
}

ScalarField make_initial_data(const GridLayout& g, const DataSpec& d) {
    const std::size_t n = g.n;
    const double dx = g.dx();
    auto x1 = [&](std::size_t i) { return static_cast<double>(g.dim == 1 ? i : i / n) * dx; };
    auto x2 = [&](std::size_t i) { return g.dim == 1 ? 0.0 : static_cast<double>(i % n) * dx; };
    ScalarField f(g, d.name);

    if (d.name == "riemann") {
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = x1(i) < d.x0 ? d.rho_left : d.rho_right;
    } else if (d.name == "sine") {
        for (std::size_t i = 0; i < g.size(); ++i)
            f.values[i] = d.offset + d.amplitude * std::sin(kTwoPi * d.k * (x1(i) + x2(i)) / g.L);
    } else if (d.name == "constant") {
        for (auto& v : f.values) v = d.offset;
    } else if (d.name == "barenblatt") {
        const double C = d.barenblatt_c > 0.0 ? d.barenblatt_c
                                              : barenblatt_constant_for_radius(d.n, g.dim, d.t0, 0.15 * g.L);
        f = barenblatt_field(g, d.n, d.t0, C);
        f.label = d.name;
    } else if (d.name == "diagonal-wave") {
        if (g.dim != 2) throw InputError("diagonal-wave data needs a 2D grid");
        if (d.direction != 1 && d.direction != -1) throw InputError("diagonal-wave direction must be +1 or -1");
        if (d.j_lo < 0 || d.j_hi < d.j_lo || std::ldexp(1.0, d.j_hi) >= static_cast<double>(n) / 2.0)
            throw InputError("diagonal-wave octaves out of range");
        std::mt19937_64 rng(d.seed);
        std::uniform_real_distribution<double> phase(0.0, kTwoPi);
        std::vector<double> ph;
        for (int j = d.j_lo; j <= d.j_hi; ++j) ph.push_back(phase(rng));
        double norm = 0.0;
        for (int j = d.j_lo; j <= d.j_hi; ++j) norm += std::pow(2.0, -j * d.s0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double s = x1(i) + d.direction * x2(i);
            double acc = 0.0;
            for (int j = d.j_lo; j <= d.j_hi; ++j)
                acc += std::pow(2.0, -j * d.s0) *
                       std::cos(kTwoPi * std::ldexp(1.0, j) * s / g.L + ph[static_cast<std::size_t>(j - d.j_lo)]);
            f.values[i] = d.offset + d.amplitude * acc / norm;
        }
    } else if (d.name == "random-bandlimited") {
        if (d.j_cut < 0 || std::ldexp(1.0, d.j_cut) >= static_cast<double>(n) / 2.0)
            throw InputError("j_cut out of range for the grid");
        const int kc = 1 << d.j_cut;
        std::mt19937_64 rng(d.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> acc(g.size(), 0.0);
        if (g.dim == 1) {
            for (int k = 1; k <= kc; ++k) {
                const double a = normal(rng), b = normal(rng);
                for (std::size_t i = 0; i < n; ++i) {
                    const double th = kTwoPi * k * x1(i) / g.L;
                    acc[i] += a * std::cos(th) + b * std::sin(th);
                }
            }
        } else {
            for (int k1 = -kc; k1 <= kc; ++k1)
                for (int k2 = 0; k2 <= kc; ++k2) {
                    if (k2 == 0 && k1 <= 0) continue;
                    const double a = normal(rng), b = normal(rng);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        const double th = kTwoPi * (k1 * x1(i) + k2 * x2(i)) / g.L;
                        acc[i] += a * std::cos(th) + b * std::sin(th);
                    }
                }
        }
        double peak = 0.0;
        for (double v : acc) peak = std::max(peak, std::fabs(v));
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = d.offset + d.amplitude * acc[i] / peak;
    } else {
        throw InputError(fmt::format("unknown initial data '{}'", d.name));
    }
    return f;
}

}  // namespace velavg::pde
