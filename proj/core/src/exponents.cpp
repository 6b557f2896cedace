#include "velavg/exponents.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "velavg/error.hpp"

namespace velavg::exponents {
namespace {

void check_exponents(const LemmaParams& prm) {
    if (!(prm.p > 1.0 && prm.p <= 2.0)) throw LemmaInapplicable(fmt::format("1 < p <= 2 (p = {})", prm.p));
    if (!(prm.q >= 1.0 && prm.q <= prm.p))
        throw LemmaInapplicable(fmt::format("1 <= q <= p (q = {}, p = {})", prm.q, prm.p));
    if (!(prm.alpha > 0.0) || !std::isfinite(prm.alpha))
        throw LemmaInapplicable(fmt::format("alpha > 0 (alpha = {})", prm.alpha));
}

double r_of(double theta, double p, double q) { return 1.0 / ((1.0 - theta) / p + theta / q); }

}  // namespace

std::string to_string(PredictionMode m) {
    switch (m) {
        case PredictionMode::homogeneous: return "homogeneous";
        case PredictionMode::improved: return "improved";
        case PredictionMode::general: return "general";
    }
    return "unknown";
}

std::string to_string(PredictionStatus s) {
    switch (s) {
        case PredictionStatus::ok: return "ok";
        case PredictionStatus::no_gain: return "no-gain";
        case PredictionStatus::no_prediction: return "no-prediction";
    }
    return "unknown";
}

double inverse_conjugate(double p) {
    if (std::isinf(p)) return 1.0;
    if (!(p >= 1.0)) throw InputError(fmt::format("exponent must be >= 1, got {}", p));
    return 1.0 - 1.0 / p;
}

RegularityPrediction theta_homogeneous(const LemmaParams& prm) {
    check_exponents(prm);
    const double ip = inverse_conjugate(prm.p);
    const double iq = inverse_conjugate(prm.q);
    if (!(prm.N >= 0.0)) throw LemmaInapplicable(fmt::format("N >= 0 (N = {})", prm.N));
    // alpha < (N + 1) q'
    if (!(prm.alpha * iq < prm.N + 1.0))
        throw LemmaInapplicable(fmt::format("alpha < (N+1) q' (alpha = {}, N = {}, q = {})", prm.alpha, prm.N, prm.q));
    if (!(prm.k > prm.sigma + prm.eta))
        throw LemmaInapplicable(fmt::format("k > sigma + eta (k = {}, sigma = {}, eta = {})", prm.k, prm.sigma, prm.eta));

    RegularityPrediction out;
    out.mode = PredictionMode::homogeneous;
    out.theta = prm.alpha * ip / (prm.alpha * (ip - iq) + prm.N + 1.0);
    out.gain = prm.k - prm.eta;
    out.s_pre = (1.0 - out.theta) * prm.sigma + out.theta * out.gain;
    out.s_boot = bootstrap_fixed_point(out.theta, out.gain, prm.sigma);
    out.r = r_of(out.theta, prm.p, prm.q);
    return out;
}

RegularityPrediction theta_improved(const LemmaParams& prm) {
    check_exponents(prm);
    const double ip = inverse_conjugate(prm.p);
    const double iq = inverse_conjugate(prm.q);
    if (!(prm.mu >= 0.0 && prm.mu <= 1.0)) throw LemmaInapplicable(fmt::format("0 <= mu <= 1 (mu = {})", prm.mu));
    // alpha < q'
    if (!(prm.alpha * iq < 1.0))
        throw LemmaInapplicable(fmt::format("alpha < q' (alpha = {}, q = {})", prm.alpha, prm.q));
    if (!(prm.k > prm.sigma))
        throw LemmaInapplicable(fmt::format("k > sigma (k = {}, sigma = {})", prm.k, prm.sigma));

    RegularityPrediction out;
    out.mode = PredictionMode::improved;
    out.theta = prm.alpha * ip / (prm.alpha * (ip - iq) + 2.0 - prm.mu);
    out.gain = prm.k;
    out.s_pre = (1.0 - out.theta) * prm.sigma + out.theta * out.gain;
    out.s_boot = bootstrap_fixed_point(out.theta, out.gain, prm.sigma);
    out.r = r_of(out.theta, prm.p, prm.q);
    return out;
}

RegularityPrediction predict_general(const degeneracy::DegeneracyProfile& profile, const LemmaParams& prm) {
    RegularityPrediction out;
    out.mode = PredictionMode::general;
    if (profile.degenerate_flag || profile.status == degeneracy::ProfileStatus::degenerate) {
        out.status = PredictionStatus::no_prediction;
        out.note = "degenerate symbol";
        return out;
    }
    if (profile.trivially_nondegenerate()) {
        out.status = PredictionStatus::no_prediction;
        out.note = "velocity sets are empty on the grid; no finite alpha";
        return out;
    }
    LemmaParams local = prm;
    local.alpha = profile.alpha;
    local.mu = profile.mu;
    check_exponents(local);
    const double ip = inverse_conjugate(local.p);
    const double iq = inverse_conjugate(local.q);
    if (!(local.alpha * iq < 1.0))
        throw LemmaInapplicable(fmt::format("alpha < q' (alpha = {}, q = {})", local.alpha, local.q));

    out.theta = local.alpha * ip / (local.alpha * (ip - iq) + 2.0 - local.mu);
    out.r = r_of(out.theta, local.p, local.q);
    out.gain = profile.beta * (2.0 - profile.mu - profile.lambda);
    if (!(out.gain > 0.0)) {
        out.status = PredictionStatus::no_gain;
        out.gain = 0.0;
        out.s_pre = local.sigma;
        out.s_boot = local.sigma;
        out.note = "mu + lambda >= 2: no regularity gain";
        return out;
    }
    out.s_pre = (1.0 - out.theta) * local.sigma + out.theta * out.gain;
    out.s_boot = bootstrap_fixed_point(out.theta, out.gain, local.sigma);
    return out;
}

double bootstrap_fixed_point(double theta, double gain, double sigma0) {
    if (!(theta >= 0.0 && theta < 1.0)) throw InputError(fmt::format("theta must lie in [0, 1), got {}", theta));
    if (!std::isfinite(gain) || !std::isfinite(sigma0)) throw InputError("bootstrap inputs must be finite");
    const double closed = 2.0 * theta * gain / (1.0 + theta);
    double s = sigma0;
    for (int it = 0; it < 100000; ++it) {
        const double next = 0.5 * (1.0 - theta) * s + theta * gain;
        const double step = std::fabs(next - s);
        s = next;
        if (step < 1e-14) break;
    }
    if (std::fabs(s - closed) > 1e-12 * std::max(1.0, std::fabs(closed)))
        throw Error(fmt::format("bootstrap iteration {} disagrees with closed form {}", s, closed));
    return s;
}

PredictionRecord paper_prediction(std::string_view example_id, const ExampleParams& prm) {
    PredictionRecord rec;
    rec.example = std::string(example_id);
    const double l = prm.ell, m = prm.m, n = prm.n;
    auto need_positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) throw InputError(fmt::format("{} must be positive, got {}", name, x));
    };
    auto burgers = [](double e) { return 1.0 / (e + 2.0); };
    auto porous = [](double e) { return 2.0 / (e + 2.0); };

    if (example_id == "burgers") {
        need_positive(l, "ell");
        rec.s_max = burgers(l);
        rec.regime = fmt::format("convection degree {}", l);
    } else if (example_id == "twod-flux") {
        need_positive(l, "ell");
        need_positive(m, "m");
        if (l == m) {
            rec.regime = "identical flux degrees";
            rec.reason = "degenerate: a(v) stays parallel to a fixed vector";
        } else {
            rec.s_max = std::min(burgers(l), burgers(m));
            rec.regime = fmt::format("flux degrees ({}, {})", l, m);
        }
    } else if (example_id == "sine-cubic") {
        rec.s_max = 1.0 / 6.0;
        rec.regime = "fourth-order contact";
    } else if (example_id == "porous") {
        need_positive(n, "n");
        rec.s_max = porous(n);
        rec.regime = fmt::format("diffusion degree {}", n);
    } else if (example_id == "convdiff") {
        need_positive(l, "ell");
        need_positive(n, "n");
        if (n <= l) {
            rec.s_max = porous(n);
            rec.regime = "diffusion dominated (n <= ell)";
        } else if (n >= 2.0 * l) {
            rec.s_max = burgers(l);
            rec.regime = "convection dominated (n >= 2 ell)";
        } else {
            const double zeta = n / l - 1.0;
            const double alpha = (1.0 - zeta) / l + zeta / n;
            const double beta_alpha = (1.0 - zeta) / l + 2.0 * zeta / n;
            rec.s_max = beta_alpha / (2.0 * alpha + 1.0);
            rec.regime = fmt::format("intermediate (ell < n < 2 ell, zeta = {})", zeta);
        }
    } else if (example_id == "twod-convdiff") {
        need_positive(l, "ell");
        need_positive(m, "m");
        need_positive(n, "n");
        const double s_lm = std::min(burgers(l), burgers(m));
        const double s_n = porous(n);
        if (l == m || n <= std::min(l, m)) {
            rec.s_max = s_n;
            rec.regime = l == m ? "identical flux degrees: diffusion only" : "diffusion dominated";
        } else if (n >= 2.0 * std::max(l, m)) {
            rec.s_max = s_lm;
            rec.regime = "convection dominated";
        } else {
            rec.s_max = std::min(s_lm, s_n);
            rec.s_upper = std::max(s_lm, s_n);
            rec.interval = true;
            rec.regime = "intermediate: only an interval is known";
        }
    } else if (example_id == "fully-degenerate") {
        need_positive(l, "ell");
        need_positive(n, "n");
        if (n >= 2.0 * l) {
            double s = 6.0 / (2.0 + 2.0 * n - l);
            if (s > 1.0) {
                s = 1.0;
                rec.clamped = true;
            }
            rec.s_max = s;
            rec.regime = "n >= 2 ell";
        } else {
            rec.regime = "n < 2 ell";
            rec.reason = "outside the regime covered by the estimate";
        }
    } else if (example_id == "elliptic") {
        const double a = prm.alpha;
        if (!(a > 0.0 && a <= 1.0)) {
            rec.regime = fmt::format("alpha = {}", a);
            rec.reason = "alpha outside (0, 1]";
        } else {
            rec.s_max = std::min(a, 2.0 * a / (2.0 * a + 1.0));
            rec.regime = a < 0.5 ? "alpha < 1/2" : "alpha >= 1/2";
        }
    } else {
        throw InputError(fmt::format("unknown example id '{}'", example_id));
    }

    if (rec.s_max) {
        const double pd = prm.p_data;
        if (!(pd >= 1.0)) throw InputError(fmt::format("data integrability must be >= 1, got {}", pd));
        if (pd == 1.0) {
            rec.s_max.reset();
            rec.s_upper.reset();
            rec.reason = "L^1 data: the estimate degenerates";
        } else {
            const double scale = inverse_conjugate(pd);  // 1/p'
            *rec.s_max *= scale;
            if (rec.s_upper) *rec.s_upper *= scale;
        }
    }
    return rec;
}

}  // namespace velavg::exponents
