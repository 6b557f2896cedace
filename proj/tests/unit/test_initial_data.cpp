#include <cmath>

#include <doctest.h>

#include "velavg/error.hpp"
#include "velavg/initial_data.hpp"

using namespace velavg;
using namespace velavg::pde;

namespace {

// Mass of the 1D profile by fine midpoint quadrature.
double mass_1d(double n, double t, double C) {
    const int k = 200000;
    const double h = 2.0 / k;
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        const double x = -1.0 + (i + 0.5) * h;
        s += barenblatt(n, 1, t, C, x * x) * h;
    }
    return s;
}

}  // namespace

TEST_CASE("Barenblatt profile solves the porous medium equation") {
    const double n = 2.0, C = 0.05, t = 0.02;
    const double m = n + 1.0;
    auto u = [&](double tt, double x) { return barenblatt(n, 1, tt, C, x * x); };
    auto B = [&](double tt, double x) { return std::pow(u(tt, x), m) / m; };
    for (double x : {0.0, 0.02, 0.05}) {
        REQUIRE(u(t, x) > 0.0);
        const double ht = 1e-6, hx = 1e-3;
        const double ut = (u(t + ht, x) - u(t - ht, x)) / (2 * ht);
        const double bxx = (B(t, x + hx) - 2 * B(t, x) + B(t, x - hx)) / (hx * hx);
        CHECK(ut == doctest::Approx(bxx).epsilon(1e-3));
    }
}

TEST_CASE("Barenblatt mass is conserved and the support radius is as requested") {
    const double n = 2.0;
    const double C = barenblatt_constant_for_radius(n, 1, 0.01, 0.15);
    CHECK(barenblatt(n, 1, 0.01, C, 0.149 * 0.149) > 0.0);
    CHECK(barenblatt(n, 1, 0.01, C, 0.151 * 0.151) == 0.0);
    CHECK(mass_1d(n, 0.01, C) == doctest::Approx(mass_1d(n, 0.05, C)).epsilon(1e-5));
}

TEST_CASE("2D Barenblatt is radial") {
    const double C = barenblatt_constant_for_radius(1.0, 2, 0.01, 0.2);
    const auto f = barenblatt_field(GridLayout(2, 64, 1.0), 1.0, 0.01, C);
    CHECK(f(32, 40) == doctest::Approx(f(40, 32)));
    CHECK(f(32, 32) == f.max());
    CHECK(f(0, 0) == 0.0);
}

TEST_CASE("named data") {
    const GridLayout g(1, 16, 1.0);
    DataSpec r;
    r.rho_left = 2.0;
    r.rho_right = -1.0;
    r.x0 = 0.5;
    const auto fr = make_initial_data(g, r);
    CHECK(fr(7) == 2.0);
    CHECK(fr(8) == -1.0);

    DataSpec c;
    c.name = "constant";
    c.offset = 0.3;
    CHECK(make_initial_data(g, c).min() == 0.3);

    DataSpec s;
    s.name = "sine";
    s.amplitude = 2.0;
    const auto fs = make_initial_data(g, s);
    CHECK(fs(4) == doctest::Approx(2.0));
    CHECK(std::fabs(fs.integral()) < 1e-14);

    DataSpec rb;
    rb.name = "random-bandlimited";
    rb.amplitude = 0.4;
    const auto f1 = make_initial_data(GridLayout(2, 32, 1.0), rb);
    CHECK(std::max(f1.max(), -f1.min()) == doctest::Approx(0.4));
    CHECK(make_initial_data(GridLayout(2, 32, 1.0), rb).values == f1.values);

    DataSpec bad;
    bad.name = "nope";
    CHECK_THROWS_AS(make_initial_data(g, bad), InputError);
}

TEST_CASE("diagonal wave is constant along its direction") {
    DataSpec d;
    d.name = "diagonal-wave";
    d.direction = -1;
    d.j_hi = 3;
    const auto f = make_initial_data(GridLayout(2, 32, 1.0), d);
    for (std::size_t i = 0; i < 31; ++i) CHECK(f(i, i) == doctest::Approx(f(i + 1, i + 1)));
    CHECK_THROWS_AS(make_initial_data(GridLayout(1, 32, 1.0), d), InputError);
}
