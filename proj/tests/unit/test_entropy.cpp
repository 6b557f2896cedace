#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "velavg/error.hpp"
#include "velavg/initial_data.hpp"
#include "velavg/pde.hpp"

using namespace velavg;
using namespace velavg::pde;

namespace {

SymbolSpec burgers() { return SymbolSpec::conservation_law({VelocityFunction::power(1)}, {-1, 1}); }

Trajectory stationary_shock(std::size_t n, Scheme s) {
    DataSpec d;
    d.rho_left = 1.0;
    d.rho_right = -1.0;
    d.x0 = 0.5;
    SchemeConfig cfg;
    cfg.scheme = s;
    cfg.final_time = 0.1;
    cfg.snapshot_times = {0.05, 0.1};
    cfg.store_successors = true;
    return s == Scheme::kinetic_bgk ? solve_kinetic_bgk(burgers(), make_initial_data(GridLayout(1, n, 1.0), d), cfg)
                                    : solve_conservation_law(burgers(), make_initial_data(GridLayout(1, n, 1.0), d), cfg);
}


}  // namespace

TEST_CASE("stationary shock dissipates at the Rankine-Hugoniot rate") {
    for (Scheme s : {Scheme::godunov, Scheme::engquist_osher, Scheme::lax_friedrichs, Scheme::kinetic_bgk}) {
        const std::size_t n = 256;
        const auto tr = stationary_shock(n, s);
        const auto m = entropy_production(tr, burgers());
        REQUIRE(m.slabs() >= 2);
        CHECK(m.min_value >= -m.roundoff_floor);
        // Kruzkov parameter v: the jump from 1 to -1 dissipates (1 - v^2) / 2 per unit time
        for (std::size_t iv = 0; iv < m.v.size(); iv += 4) {
            const double oracle = 0.5 * (1.0 - m.v[iv] * m.v[iv]);
            const double got = m.column_mass(m.slabs() - 1, iv, n / 4, 3 * n / 4);
            CHECK(got == doctest::Approx(oracle).epsilon(0.1).scale(0.01));
        }
    }
}

TEST_CASE("total dissipation matches the velocity average") {
    const auto tr = stationary_shock(256, Scheme::godunov);
    const auto m = entropy_production(tr, burgers());
    const std::size_t mid = m.v.size() / 2;
    CHECK(m.v[mid] == doctest::Approx(0.0));
    CHECK(m.column_mass(0, mid, 64, 192) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(m.total_mass > 0.0);
}

TEST_CASE("smooth solutions produce O(dx) entropy") {
    std::vector<double> rates;
    for (std::size_t n : {256u, 512u}) {
        DataSpec d;
        d.name = "sine";
        d.amplitude = 0.5;
        SchemeConfig cfg;
        cfg.final_time = 0.1;  // the shock forms at t = 1 / pi
        cfg.snapshot_times = {0.1};
        cfg.store_successors = true;
        const auto tr = solve_conservation_law(burgers(), make_initial_data(GridLayout(1, n, 1.0), d), cfg);
        const auto m = entropy_production(tr, burgers());
        CHECK(m.min_value >= -m.roundoff_floor);
        rates.push_back(m.total_mass / m.dts[0]);
    }
    CHECK(rates[1] / rates[0] == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("diagonal degenerate diffusion keeps the production nonnegative in 2D") {
    const auto a = VelocityFunction::power(1);
    const auto b = VelocityFunction::abs_power(2);
    const auto z = VelocityFunction::zero();
    const SymbolSpec spec(2, {a, a.scaled(0.5)}, {b, z, z, b.scaled(0.5)}, {-1, 1}, true);
    DataSpec d;
    d.name = "random-bandlimited";
    d.amplitude = 0.5;
    SchemeConfig cfg;
    cfg.final_time = 0.05;
    cfg.snapshot_times = {0.05};
    cfg.store_successors = true;
    const auto tr = solve_convection_diffusion(spec, make_initial_data(GridLayout(2, 32, 1.0), d), cfg);
    const auto m = entropy_production(tr, spec);
    CHECK(m.min_value >= -m.roundoff_floor);
    CHECK(m.total_mass > 0.0);
}

TEST_CASE("a trajectory without successors is rejected") {
    SchemeConfig cfg;
    cfg.final_time = 0.01;
    DataSpec d;
    const auto tr = solve_conservation_law(burgers(), make_initial_data(GridLayout(1, 32, 1.0), d), cfg);
    CHECK_THROWS_AS(entropy_production(tr, burgers()), InputError);
}
