#include <cmath>

#include <doctest.h>

#include "velavg/error.hpp"
#include "velavg/exponents.hpp"

using namespace velavg;
using namespace velavg::exponents;

TEST_CASE("homogeneous theta") {
    LemmaParams a;
    a.alpha = 1.0;
    a.p = 2.0;
    a.q = 2.0;
    a.N = 0.0;
    a.sigma = 0.3;
    a.k = 1.3;
    const auto r = theta_homogeneous(a);
    CHECK(r.theta == doctest::Approx(0.5));
    CHECK(r.s_pre == doctest::Approx(0.3 + 0.5));

    LemmaParams b;
    b.alpha = 1.0;
    b.p = 2.0;
    b.q = 1.0;
    b.N = 1.0;
    const auto rb = theta_homogeneous(b);
    CHECK(rb.theta == doctest::Approx(0.2));
    CHECK(rb.s_pre == doctest::Approx(0.2));

    LemmaParams c = b;
    c.alpha = 1e-9;
    c.sigma = 0.25;
    c.k = 1.0;
    CHECK(theta_homogeneous(c).s_pre == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("homogeneous lemma rejects alpha >= (N+1) q'") {
    LemmaParams a;
    a.alpha = 5.0;
    a.p = 2.0;
    a.q = 2.0;
    a.N = 1.0;
    try {
        theta_homogeneous(a);
        FAIL("expected LemmaInapplicable");
    } catch (const LemmaInapplicable& e) {
        CHECK(e.inequality().find("q'") != std::string::npos);
    }
}

TEST_CASE("improved theta") {
    LemmaParams a;
    a.alpha = 1.0;
    a.p = 2.0;
    a.q = 1.0;
    a.mu = 0.0;
    const auto r = theta_improved(a);
    CHECK(r.theta == doctest::Approx(0.2));
    CHECK(r.s_pre == doctest::Approx(0.2));
    a.q = 2.0;
    a.mu = 1.0;
    CHECK(theta_improved(a).theta == doctest::Approx(0.5));
    CHECK(theta_improved(a).s_pre == doctest::Approx(0.5));
}

TEST_CASE("bootstrap fixed point") {
    CHECK(bootstrap_fixed_point(0.2, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(bootstrap_fixed_point(0.2, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(bootstrap_fixed_point(0.37, 0.0) == 0.0);
    for (double th = 0.0; th < 0.99; th += 0.07)
        for (double g : {0.5, 1.0, 3.0})
            CHECK(bootstrap_fixed_point(th, g, 0.4) == doctest::Approx(2.0 * th * g / (1.0 + th)).epsilon(1e-12));
    CHECK_THROWS_AS(bootstrap_fixed_point(1.0, 1.0), InputError);
}

TEST_CASE("general lemma on closed-form profiles") {
    LemmaParams prm;
    prm.p = 2.0;
    prm.q = 1.0;
    degeneracy::DegeneracyProfile pm;
    pm.alpha = 0.5;
    pm.beta = 2.0;
    pm.mu = 0.5;
    pm.lambda = 0.5;
    const auto r = predict_general(pm, prm);
    CHECK(r.theta == doctest::Approx(1.0 / 7.0));
    CHECK(r.s_pre == doctest::Approx(2.0 / 7.0));
    CHECK(r.s_boot == doctest::Approx(0.5));

    degeneracy::DegeneracyProfile hyp;
    hyp.alpha = 1.0;
    hyp.beta = 1.0;
    hyp.mu = 0.0;
    hyp.lambda = 1.0;
    CHECK(predict_general(hyp, prm).s_pre == doctest::Approx(0.2));

    degeneracy::DegeneracyProfile flat = hyp;
    flat.mu = 1.0;
    flat.lambda = 1.0;
    prm.sigma = 0.1;
    const auto nf = predict_general(flat, prm);
    CHECK(nf.status == PredictionStatus::no_gain);
    CHECK(nf.s_pre == 0.1);

    degeneracy::DegeneracyProfile deg;
    deg.degenerate_flag = true;
    CHECK(predict_general(deg, prm).status == PredictionStatus::no_prediction);
}

TEST_CASE("worked-example predictions") {
    ExampleParams e;
    e.ell = 2;
    CHECK(*paper_prediction("burgers", e).s_max == doctest::Approx(0.25));
    e.n = 2;
    CHECK(*paper_prediction("porous", e).s_max == doctest::Approx(0.5));
    CHECK(*paper_prediction("sine-cubic", e).s_max == doctest::Approx(1.0 / 6.0));
    e.ell = 1;
    e.m = 1;
    CHECK_FALSE(paper_prediction("twod-flux", e).s_max);
    e.m = 2;
    CHECK(*paper_prediction("twod-flux", e).s_max == doctest::Approx(0.25));

    e.ell = 1;
    e.n = 2;
    const auto fd = paper_prediction("fully-degenerate", e);
    CHECK(*fd.s_max == 1.0);
    CHECK(fd.clamped);
    e.n = 4;
    CHECK(*paper_prediction("fully-degenerate", e).s_max == doctest::Approx(2.0 / 3.0));
    CHECK_FALSE(paper_prediction("fully-degenerate", e).clamped);

    e.alpha = 1.0;
    CHECK(*paper_prediction("elliptic", e).s_max == doctest::Approx(2.0 / 3.0));
    e.alpha = 0.25;
    CHECK(*paper_prediction("elliptic", e).s_max == doctest::Approx(0.25));

    CHECK_THROWS_AS(paper_prediction("nonsense", e), InputError);
}

TEST_CASE("convection-diffusion regimes") {
    ExampleParams e;
    e.ell = 2;
    e.n = 1;
    CHECK(*paper_prediction("convdiff", e).s_max == doctest::Approx(2.0 / 3.0));
    e.ell = 1;
    e.n = 2;
    CHECK(*paper_prediction("convdiff", e).s_max == doctest::Approx(1.0 / 3.0));
    e.ell = 2;
    e.n = 3;  // zeta = 1/2, alpha = 5/12, beta alpha = 7/12
    CHECK(*paper_prediction("convdiff", e).s_max == doctest::Approx(7.0 / 22.0));
}

TEST_CASE("data integrability scales the prediction") {
    ExampleParams e;
    e.ell = 1;
    e.p_data = 2.0;
    CHECK(*paper_prediction("burgers", e).s_max == doctest::Approx(1.0 / 6.0));
    e.p_data = 1.0;
    CHECK_FALSE(paper_prediction("burgers", e).s_max);
}

TEST_CASE("worked-example predictions equal the general lemma on the analytic profile") {
    LemmaParams prm;
    prm.p = 2.0;
    prm.q = 1.0;
    for (int l = 1; l <= 4; ++l) {
        const auto spec = SymbolSpec::conservation_law({VelocityFunction::power(l)}, {-1, 1}, false);
        ExampleParams e;
        e.ell = l;
        const double general = predict_general(degeneracy::analytic_profile(spec), prm).s_boot;
        CHECK(std::fabs(general - *paper_prediction("burgers", e).s_max) < 1e-12);
    }
    for (int n = 1; n <= 4; ++n) {
        const auto spec = SymbolSpec::diffusion_only(1, {VelocityFunction::abs_power(n)}, {-1, 1}, false);
        ExampleParams e;
        e.n = n;
        const double general = predict_general(degeneracy::analytic_profile(spec), prm).s_boot;
        CHECK(std::fabs(general - *paper_prediction("porous", e).s_max) < 1e-12);
    }
}
