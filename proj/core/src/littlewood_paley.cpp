#include "velavg/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "velavg/error.hpp"
#include "velavg/fft.hpp"
#include "velavg/parallel.hpp"
#include "velavg/regression.hpp"

namespace velavg::lp {
namespace {

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double windowed_norm(const double* values, const ScalarField* window, std::size_t n, double cell, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = window ? window->values[i] * values[i] : values[i];
        if (p == 1.0) s += std::fabs(x);
        else if (p == 2.0) s += x * x;
        else s += std::pow(std::fabs(x), p);
    }
    return std::pow(s * cell, 1.0 / p);
}

int ilog2(std::size_t n) {
    int k = 0;
    while ((std::size_t{1} << (k + 1)) <= n) ++k;
    return k;
}

}  // namespace

double phi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * std::log2(r));
    return c * c;
}

double band_weight(int j, double r, int j_last) {
    if (j_last == 0) return 1.0;
    if (j == 0) return phi(r);
    const double lower = phi(r / std::ldexp(1.0, j - 1));
    if (j == j_last) return 1.0 - lower;
    return phi(r / std::ldexp(1.0, j)) - lower;
}

int nyquist_octave(const GridLayout& layout) {
    const double half = static_cast<double>(layout.n) / 2.0;
    const double r_max = layout.dim == 1 ? half : std::sqrt(2.0) * half;
    return static_cast<int>(std::ceil(std::log2(r_max) - 1e-12));
}

Decomposition lp_decompose(const ScalarField& f, int j_max) {
    if (j_max < 0) throw InputError("j_max must be non-negative");
    if (f.values.size() != f.layout.size()) throw InputError("field size does not match its layout");
    for (double x : f.values)
        if (!std::isfinite(x)) throw InputError("field values must be finite");
    Decomposition dec;
    const int j_nyq = nyquist_octave(f.layout);
    if (j_max > j_nyq) {
        dec.warnings.push_back(fmt::format("j_max {} exceeds the Nyquist octave {}; truncated", j_max, j_nyq));
        j_max = j_nyq;
    }
    dec.j_max = j_max;

    fft::RealFft plan(f.layout);
    std::vector<std::complex<double>> spec(plan.spectrum_size());
    plan.forward(f.values.data(), spec.data());
    std::vector<double> radius(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) radius[i] = plan.radius(i);

    dec.blocks.assign(static_cast<std::size_t>(j_max + 1), ScalarField(f.layout, f.label));
    std::vector<std::complex<double>> work(spec.size());
    for (int j = 0; j <= j_max; ++j) {
        for (std::size_t i = 0; i < spec.size(); ++i) work[i] = spec[i] * band_weight(j, radius[i], j_max);
        auto& blk = dec.blocks[static_cast<std::size_t>(j)];
        plan.inverse(work.data(), blk.values.data());
        blk.label = fmt::format("{} block {}", f.label, j);
    }
    return dec;
}

WindowKind parse_window_kind(const std::string& name) {
    if (name == "none") return WindowKind::none;
    if (name == "plateau") return WindowKind::plateau;
    if (name == "distance") return WindowKind::distance;
    throw InputError(fmt::format("unknown window '{}'", name));
}

std::string to_string(WindowKind k) {
    switch (k) {
        case WindowKind::none: return "none";
        case WindowKind::plateau: return "plateau";
        case WindowKind::distance: return "distance";
    }
    return "unknown";
}

ScalarField window_field(const GridLayout& layout, const Window& w) {
    const std::size_t n = layout.n;
    const double L = layout.L;
    std::vector<double> prof(n, 1.0);
    if (w.kind == WindowKind::plateau) {
        if (!(w.plateau_fraction > 0.0 && w.ramp_fraction > 0.0 && w.plateau_fraction + 2 * w.ramp_fraction <= 1.0))
            throw InputError("plateau window fractions must be positive and fit in the box");
        const double a = 0.5 * (1.0 - w.plateau_fraction) * L;
        const double b = L - a;
        const double r = w.ramp_fraction * L;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) * layout.dx();
            prof[i] = smooth_step((x - (a - r)) / r) * smooth_step(((b + r) - x) / r);
        }
    }
    ScalarField out(layout, "window");
    if (w.kind == WindowKind::distance) {
        if (!(w.epsilon_fraction > 0.0 && w.epsilon_fraction < 0.5)) throw InputError("epsilon fraction out of range");
        const double eps = w.epsilon_fraction * L;
        auto dist = [&](std::size_t i) {
            const double x = static_cast<double>(i) * layout.dx();
            return std::min(x, L - x);
        };
        for (std::size_t i = 0; i < layout.size(); ++i) {
            double d = layout.dim == 1 ? dist(i) : std::min(dist(i / n), dist(i % n));
            out.values[i] = smooth_step((d - 0.5 * eps) / (0.5 * eps));
        }
        return out;
    }
    for (std::size_t i = 0; i < layout.size(); ++i)
        out.values[i] = layout.dim == 1 ? prof[i] : prof[i / n] * prof[i % n];
    return out;
}

std::vector<BandNorm> block_norms(const std::vector<ScalarField>& blocks, double p, const ScalarField* window) {
    if (!(p >= 1.0) || std::isinf(p)) throw InputError("block norms need finite p >= 1");
    std::vector<BandNorm> out(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t j) {
        const auto& b = blocks[j];
        if (window && !(window->layout == b.layout)) throw InputError("window layout differs from block layout");
        out[j].j = static_cast<int>(j);
        out[j].norm = windowed_norm(b.values.data(), window, b.values.size(), b.layout.cell_volume(), p);
    });
    return out;
}

Method parse_method(const std::string& name) {
    if (name == "lp") return Method::lp;
    if (name == "increments") return Method::increments;
    throw InputError(fmt::format("unknown estimator method '{}'", name));
}

std::string to_string(Method m) { return m == Method::lp ? "lp" : "increments"; }

namespace {

/// Fits log2 norm = c - s j over the longest run of usable entries with j in [lo, hi].
void fit_decay(RegularityEstimate& est, int lo, int hi, double threshold, const EstimatorParams& prm) {
    auto usable = [&](int j) {
        if (j < lo || j > hi) return false;
        const auto& b = est.bands[static_cast<std::size_t>(j)];
        return b.norm >= threshold && b.norm > 0.0;
    };
    int best_start = -1, best_len = 0;
    for (int j = lo; j <= hi;) {
        if (!usable(j)) {
            ++j;
            continue;
        }
        int k = j;
        while (k <= hi && usable(k)) ++k;
        if (k - j > best_len) {
            best_len = k - j;
            best_start = j;
        }
        j = k;
    }
    // bands above the run all below threshold: the field is resolved to round-off
    bool decays_out = true;
    for (int j = (best_start < 0 ? lo : best_start + best_len); j <= hi; ++j) decays_out &= !usable(j);
    const bool any_above_run = best_start >= 0 && best_start + best_len <= hi;

    if (best_len < prm.min_bands) {
        if (best_len == 0 || (decays_out && any_above_run)) {
            est.s_raw = std::numeric_limits<double>::infinity();
            est.s_star = prm.cap;
            est.capped = true;
            est.smooth_flag = true;
            est.bv_flag = true;
            est.j_min = best_start < 0 ? lo : best_start;
            est.j_max = best_start < 0 ? lo - 1 : best_start + best_len - 1;
            est.warnings.push_back("norms fall to round-off within the fit range");
            return;
        }
        throw InsufficientResolution(
            fmt::format("only {} usable bands in [{}, {}] (need {})", best_len, lo, hi, prm.min_bands));
    }
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int j = best_start; j < best_start + best_len; ++j) {
        est.bands[static_cast<std::size_t>(j)].used = true;
        x.push_back({static_cast<double>(j)});
        y.push_back(std::log2(est.bands[static_cast<std::size_t>(j)].norm));
    }
    const LinearFit fit = trimmed_least_squares(x, y, prm.trim);
    est.j_min = best_start;
    est.j_max = best_start + best_len - 1;
    est.s_raw = -fit.coef[1];
    est.stderr_ = fit.stderr_[1];
    est.r_squared = fit.r_squared;
    est.bv_flag = est.s_raw >= prm.bv_threshold;
    est.smooth_flag = est.s_raw > prm.smooth_threshold || (decays_out && any_above_run);
    est.capped = est.s_raw > prm.cap;
    est.s_star = std::min(est.s_raw, prm.cap);
}

}  // namespace

RegularityEstimate estimate_regularity(const ScalarField& f, double p, const Window& window, Method method,
                                       const EstimatorParams& prm) {
    if (!(p >= 1.0) || std::isinf(p)) throw InputError("estimator needs finite p >= 1");
    if (f.values.size() != f.layout.size()) throw InputError("field size does not match its layout");
    for (double x : f.values)
        if (!std::isfinite(x)) throw InputError("field values must be finite");

    RegularityEstimate est;
    est.method = method;
    est.p = p;
    const GridLayout& g = f.layout;
    const bool use_window = window.kind != WindowKind::none;
    const ScalarField wf = window_field(g, window);
    const ScalarField* wp = use_window ? &wf : nullptr;
    const double total = windowed_norm(f.values.data(), wp, f.values.size(), g.cell_volume(), p);
    const double threshold = 1e3 * std::numeric_limits<double>::epsilon() * total;

    if (method == Method::lp) {
        const int j_nyq = nyquist_octave(g);
        const auto dec = lp_decompose(f, j_nyq);
        est.bands = block_norms(dec.blocks, p, wp);
        const int hi = j_nyq - 2;
        if (hi - 1 + 1 < prm.min_bands)
            throw InsufficientResolution(fmt::format("grid of {} points has fewer than {} bands", g.n, prm.min_bands));
        fit_decay(est, 1, hi, threshold, prm);
        return est;
    }

    // increments: h = 2^-j L, shifts of n / 2^j cells
    const int J = ilog2(g.n);
    const int hi = J - 2;
    if (hi < prm.min_bands) throw InsufficientResolution("grid too small for the increment estimator");
    est.bands.assign(static_cast<std::size_t>(J + 1), BandNorm{});
    std::vector<int> js;
    for (int j = 1; j <= hi; ++j) js.push_back(j);
    parallel_for(js.size(), [&](std::size_t q) {
        const int j = js[q];
        const std::size_t shift = g.n >> j;
        const std::size_t n = g.n;
        std::vector<double> diff(g.size());
        double acc = 0.0;
        for (int axis = 0; axis < g.dim; ++axis) {
            if (g.dim == 1) {
                for (std::size_t i = 0; i < n; ++i) diff[i] = f.values[(i + shift) % n] - f.values[i];
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < n; ++k) {
                        const std::size_t src = axis == 0 ? ((i + shift) % n) * n + k : i * n + (k + shift) % n;
                        diff[i * n + k] = f.values[src] - f.values[i * n + k];
                    }
            }
            acc += windowed_norm(diff.data(), wp, diff.size(), g.cell_volume(), p);
        }
        est.bands[static_cast<std::size_t>(j)] = {j, acc, false};
    });
    for (int j = 0; j <= J; ++j) est.bands[static_cast<std::size_t>(j)].j = j;
    fit_decay(est, 1, hi, threshold, prm);
    return est;
}

}  // namespace velavg::lp
