#include <cmath>

#include <doctest.h>

#include "velavg/error.hpp"
#include "velavg/symbol.hpp"

using namespace velavg;

namespace {

VelocityFunction f(const char* s) { return VelocityFunction::parse(s); }

SymbolSpec fully_degenerate(double ell, double n) {
    const auto a = VelocityFunction::power(ell);
    const auto b = VelocityFunction::abs_power(n);
    return SymbolSpec(2, {a, a}, {b, b.scaled(-1), b.scaled(-1), b}, {-1, 1}, true);
}

}  // namespace

TEST_CASE("eval_symbol examples") {
    const auto burgers = SymbolSpec::conservation_law({f("power 1")}, {-1, 1});
    const auto z = eval_symbol(burgers, FrequencyPoint(0.0, {1.0, 0.0}), 0.5);
    CHECK(z.real() == 0.0);
    CHECK(z.imag() == doctest::Approx(0.5));

    const auto porous = SymbolSpec::diffusion_only(1, {f("abs_power 2")}, {-1, 1}, true);
    const auto w = eval_symbol(porous, FrequencyPoint(0.0, {1.0, 0.0}), 0.5);
    CHECK(w.real() == doctest::Approx(0.25));
    CHECK(w.imag() == 0.0);

    const auto deg = fully_degenerate(1, 2);
    const double r = 1.0 / std::sqrt(2.0);
    const auto u = eval_symbol(deg, FrequencyPoint(0.0, {r, r}), 0.3);
    CHECK(u.imag() == doctest::Approx(0.3 * std::sqrt(2.0)));
    CHECK(std::fabs(u.real()) < 1e-15);
}

TEST_CASE("time term only with includes_time") {
    const auto with = SymbolSpec::conservation_law({f("power 1")}, {-1, 1}, true);
    const auto without = SymbolSpec::conservation_law({f("power 1")}, {-1, 1}, false);
    const FrequencyPoint fp(0.7, {1.0, 0.0});
    CHECK(eval_symbol(with, fp, 0.5).imag() == doctest::Approx(1.2));
    CHECK(eval_symbol(without, fp, 0.5).imag() == doctest::Approx(0.5));
}

TEST_CASE("eval_symbol errors") {
    const auto burgers = SymbolSpec::conservation_law({f("power 1")}, {-1, 1});
    CHECK_THROWS_AS(eval_symbol(burgers, FrequencyPoint(0.0, {1.0, 0.0}), 1.5), DomainError);
    CHECK_THROWS_AS(eval_symbol(burgers, FrequencyPoint(NAN, {1.0, 0.0}), 0.5), InputError);
}

TEST_CASE("eval_symbol_v examples") {
    const auto b2 = SymbolSpec::conservation_law({f("power 2")}, {-1, 1});
    CHECK(eval_symbol_v(b2, FrequencyPoint(0.0, {1.0, 0.0}), 0.5).value.imag() == doctest::Approx(1.0));
    const auto p3 = SymbolSpec::diffusion_only(1, {f("abs_power 3")}, {-1, 1}, true);
    CHECK(eval_symbol_v(p3, FrequencyPoint(0.0, {1.0, 0.0}), -0.5).value.real() == doctest::Approx(-0.75));
    const auto c = SymbolSpec::conservation_law({f("const 2")}, {-1, 1});
    CHECK(std::abs(eval_symbol_v(c, FrequencyPoint(0.0, {1.0, 0.0}), 0.1).value) == 0.0);
    const auto k = SymbolSpec::diffusion_only(1, {f("abs_power 1")}, {-1, 1}, true);
    CHECK(eval_symbol_v(k, FrequencyPoint(0.0, {1.0, 0.0}), 0.0).nondifferentiable);
}

TEST_CASE("smallest eigenvalue") {
    CHECK(smallest_eigenvalue(SymbolSpec::diffusion_only(1, {f("abs_power 2")}, {-1, 1}, true), 0.3) ==
          doctest::Approx(0.09));
    CHECK(std::fabs(smallest_eigenvalue(fully_degenerate(1, 2), 0.7)) < 1e-15);
    const auto iso = SymbolSpec::diffusion_only(2, {f("power 2"), f("zero"), f("zero"), f("power 2")}, {-1, 1}, true);
    CHECK(smallest_eigenvalue(iso, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("validation rejects asymmetric or indefinite diffusion") {
    CHECK_THROWS_AS(SymbolSpec(2, {f("zero"), f("zero")}, {f("const 1"), f("const 0.5"), f("const 0.2"), f("const 1")},
                               {-1, 1}, true),
                    InputError);
    CHECK_THROWS_AS(SymbolSpec::diffusion_only(1, {f("power 1")}, {-1, 1}, true), InputError);
    CHECK_THROWS_AS(SymbolSpec::conservation_law({f("power 1")}, {1, -1}), InputError);
    CHECK_THROWS_AS(SymbolSpec(3, {}, {}, {-1, 1}, true), InputError);
}

TEST_CASE("homogeneity of pure convection and pure diffusion") {
    const auto conv = SymbolSpec::conservation_law({f("power 1"), f("power 2")}, {-1, 1}, false);
    const auto diff = SymbolSpec::diffusion_only(2, {f("abs_power 1"), f("zero"), f("zero"), f("abs_power 2")}, {-1, 1},
                                                 false);
    for (double lam : {0.5, 2.0, 7.0})
        for (double v : {-0.8, 0.1, 0.6}) {
            const FrequencyPoint a(0.0, {0.3, -0.8}), b(0.0, {0.3 * lam, -0.8 * lam});
            CHECK(std::abs(eval_symbol(conv, b, v) - lam * eval_symbol(conv, a, v)) <=
                  1e-12 * std::abs(eval_symbol(conv, b, v)) + 1e-300);
            CHECK(std::abs(eval_symbol(diff, b, v) - lam * lam * eval_symbol(diff, a, v)) <=
                  1e-12 * std::abs(eval_symbol(diff, b, v)) + 1e-300);
        }
}

TEST_CASE("real part is nonnegative") {
    const auto deg = fully_degenerate(1, 2);
    for (double th = 0.0; th < 6.3; th += 0.37)
        for (double v = -1.0; v <= 1.0; v += 0.125)
            CHECK(eval_symbol(deg, FrequencyPoint(0.1, {std::cos(th), std::sin(th)}), v).real() >= -1e-12);
}

TEST_CASE("eval_symbol_v converges at second order against centred differences") {
    const auto spec = SymbolSpec(1, {f("sin 1 2 0.1")}, {f("abs_power 2")}, {-1, 1}, true);
    const FrequencyPoint fp(0.0, {1.3, 0.0});
    const double v = 0.37;
    const auto exact = eval_symbol_v(spec, fp, v).value;
    double prev = 0.0;
    std::vector<double> orders;
    for (int k = 2; k <= 6; ++k) {
        const double h = std::ldexp(1.0, -k);
        const auto fd = (eval_symbol(spec, fp, v + h) - eval_symbol(spec, fp, v - h)) / (2.0 * h);
        const double err = std::abs(fd - exact);
        if (prev > 0.0) orders.push_back(std::log2(prev / err));
        prev = err;
    }
    for (double o : orders) CHECK(o >= 1.9);
}

TEST_CASE("frequency magnitude") {
    const FrequencyPoint fp(0.6, {0.0, 0.8});
    CHECK(fp.magnitude(2, true) == doctest::Approx(1.0));
    CHECK(fp.magnitude(2, false) == doctest::Approx(0.8));
    CHECK(fp.magnitude(1, false) == 0.0);
}
