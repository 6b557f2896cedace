#include <cmath>
#include <numbers>

#include <doctest.h>

#include "velavg/error.hpp"
#include "velavg/velocity_function.hpp"

using velavg::VelocityFunction;

TEST_CASE("power kinds evaluate as declared") {
    CHECK(VelocityFunction::power(2)(-0.5) == doctest::Approx(0.25));
    CHECK(VelocityFunction::power(3)(-0.5) == doctest::Approx(-0.125));
    CHECK(VelocityFunction::abs_power(3)(-0.5) == doctest::Approx(0.125));
    CHECK(VelocityFunction::signed_power(2)(-0.5) == doctest::Approx(-0.25));
    CHECK(VelocityFunction::signed_power(0.5)(0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(VelocityFunction::power(1.5), velavg::InputError);
}

TEST_CASE("table interpolates linearly and rejects unsorted nodes") {
    const auto t = VelocityFunction::table({-1, 0, 2}, {1, 0, 4});
    CHECK(t(-0.5) == doctest::Approx(0.5));
    CHECK(t(1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(t(2.5), velavg::DomainError);
    CHECK_THROWS_AS(VelocityFunction::table({0, 0, 1}, {0, 1, 2}), velavg::InputError);
    CHECK_THROWS_AS(VelocityFunction::table({0, 1}, {0}), velavg::InputError);
}

TEST_CASE("derivatives") {
    // d/dv |v|^3 = 3 v |v|
    CHECK(VelocityFunction::abs_power(3).derivative(-0.5).value == doctest::Approx(-0.75));
    CHECK(VelocityFunction::power(2).derivative(0.5).value == doctest::Approx(1.0));
    CHECK(VelocityFunction::constant(3).derivative(0.2).value == 0.0);
    const auto kink = VelocityFunction::abs_power(1).derivative(0.0);
    CHECK(kink.nondifferentiable);
    CHECK_FALSE(VelocityFunction::abs_power(2).derivative(0.0).nondifferentiable);
    // sqrt-type cusp
    CHECK(VelocityFunction::signed_power(0.5).derivative(0.0).nondifferentiable);
}

TEST_CASE("antiderivative matches quadrature") {
    const char* specs[] = {"power 2", "abs_power 1.5", "signed_power 3", "sin 1 2 0.3", "cos 2 1", "const -1",
                           "-0.5 * abs_power 2"};
    for (const char* s : specs) {
        const auto f = VelocityFunction::parse(s);
        for (double u : {-0.9, -0.3, 0.0, 0.4, 1.0}) {
            const int n = 20000;
            double q = 0.0;
            for (int i = 0; i < n; ++i) q += f(u * (i + 0.5) / n);
            q *= u / n;
            CHECK(f.antiderivative(u) == doctest::Approx(q).epsilon(1e-7));
        }
    }
}

TEST_CASE("positive part integral splits at zeros") {
    // a = v: int_0^u max(v, 0) dv
    const auto a = VelocityFunction::power(1);
    CHECK(a.positive_part_integral(0.6) == doctest::Approx(0.18));
    CHECK(a.positive_part_integral(-0.6) == doctest::Approx(0.0));
    // a = cos v on [0, pi]: positive on [0, pi/2]
    const auto c = VelocityFunction::parse("cos 1 1");
    CHECK(c.positive_part_integral(std::numbers::pi) == doctest::Approx(1.0));
}

TEST_CASE("zeros and kinks") {
    const auto s = VelocityFunction::parse("sin 1 1");
    const auto z = s.zeros_in(-4.0, 4.0);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == doctest::Approx(-std::numbers::pi));
    CHECK(z[1] == doctest::Approx(0.0));
    CHECK(VelocityFunction::abs_power(1).kinks() == std::vector<double>{0.0});
    CHECK(VelocityFunction::power(2).kinks().empty());
}

TEST_CASE("parse round-trips and applies multipliers") {
    const char* specs[] = {"power 3", "abs_power 2", "signed_power 0.5", "sin 1.5 2 0.25", "const 0.125", "zero",
                           "table -1:0 0:1 1:0", "-abs_power 2", "0.5 * power 1"};
    for (const char* s : specs) {
        const auto f = VelocityFunction::parse(s);
        CHECK(VelocityFunction::parse(f.to_string()) == f);
    }
    CHECK(VelocityFunction::parse("-abs_power 2")(0.5) == doctest::Approx(-0.25));
    CHECK(VelocityFunction::parse("3 * power 1")(0.5) == doctest::Approx(1.5));
    CHECK(VelocityFunction::parse("zero").is_zero());
    CHECK(VelocityFunction::parse("-abs_power 2").same_shape(VelocityFunction::abs_power(2)));
    CHECK_THROWS_AS(VelocityFunction::parse("wobble 2"), velavg::InputError);
    CHECK_THROWS_AS(VelocityFunction::parse("power"), velavg::InputError);
}
