#include "velavg/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "velavg/degeneracy.hpp"
#include "velavg/error.hpp"
#include "velavg/exponents.hpp"
#include "velavg/fft.hpp"
#include "velavg/parallel.hpp"

namespace velavg::lp {
namespace {

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

FrequencyPoint grid_frequency(const fft::RealFft& plan, std::size_t idx, double L, bool time_axis) {
    const auto k = plan.wavenumber(idx);
    FrequencyPoint fp;
    if (time_axis) {
        fp.tau = static_cast<double>(k[0]) / L;
        fp.xi = {static_cast<double>(k[1]) / L, 0.0};
    } else if (plan.layout().dim == 1) {
        fp.xi = {static_cast<double>(k[0]) / L, 0.0};
    } else {
        fp.xi = {static_cast<double>(k[0]) / L, static_cast<double>(k[1]) / L};
    }
    return fp;
}

void check_compatible(const XVField& f, const SymbolSpec& spec) {
    if (f.values.size() != f.layout.size() * f.vgrid.m) throw InputError("XV field size mismatch");
    if (f.time_axis) {
        if (f.layout.dim != 2 || spec.dim() != 1 || !spec.includes_time())
            throw InputError("a time axis needs a 2D layout and a 1D symbol with time");
    } else if (f.layout.dim != spec.dim()) {
        throw InputError("field and symbol dimensions differ");
    }
    if (f.vgrid.lo < spec.interval().lo || f.vgrid.hi > spec.interval().hi)
        throw InputError("velocity grid extends outside the symbol interval");
}

}  // namespace

double bump_value(Bump b, double r) {
    if (b == Bump::disc) return 1.0 - smooth_step(r - 1.0);
    return smooth_step((r - 0.5) / 0.5) * (1.0 - smooth_step(r - 1.0));
}

XVField truncation_apply(const XVField& f, const SymbolSpec& spec, double delta, Bump bump) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("delta must be positive and finite");
    check_compatible(f, spec);
    XVField out = f;
    const std::size_t M = f.vgrid.m;
    parallel_for(M, [&](std::size_t k) {
        fft::RealFft plan(f.layout);
        std::vector<std::complex<double>> spec_k(plan.spectrum_size());
        plan.forward(f.slice(k), spec_k.data());
        const double v = f.vgrid.at(k);
        for (std::size_t i = 0; i < spec_k.size(); ++i) {
            const auto L = eval_symbol(spec, grid_frequency(plan, i, f.layout.L, f.time_axis), v);
            spec_k[i] *= bump_value(bump, std::abs(L) / delta);
        }
        plan.inverse(spec_k.data(), out.slice(k));
    });
    return out;
}

std::vector<MultiplierRow> verify_averaged_multiplier(std::span<const XVField> battery, const SymbolSpec& spec,
                                                      const std::vector<double>& deltas, double p,
                                                      const VelocityFunction& weight, Bump bump,
                                                      const MultiplierParams& params) {
    if (!(p > 1.0 && p <= 2.0)) throw InputError(fmt::format("p must lie in (1, 2], got {}", p));
    if (battery.empty()) throw InputError("empty field battery");
    const XVField& first = battery.front();
    for (const auto& f : battery) {
        check_compatible(f, spec);
        if (!(f.layout == first.layout) || f.vgrid.m != first.vgrid.m || f.vgrid.lo != first.vgrid.lo ||
            f.vgrid.hi != first.vgrid.hi || f.time_axis != first.time_axis)
            throw InputError("battery fields must share their grids");
    }
    const double inv_pc = exponents::inverse_conjugate(p);
    const GridLayout g = first.layout;
    const VelocityGrid vg = first.vgrid;
    const std::size_t M = vg.m;
    const double dv = vg.dv();

    fft::RealFft plan(g);
    const std::size_t K = plan.spectrum_size();

    // |L| at every (frequency, velocity node) and the set measures per frequency
    std::vector<double> absL(K * M);
    std::vector<FrequencyPoint> freqs(K);
    for (std::size_t i = 0; i < K; ++i) freqs[i] = grid_frequency(plan, i, g.L, first.time_axis);
    parallel_for(K, [&](std::size_t i) {
        for (std::size_t k = 0; k < M; ++k) absL[i * M + k] = std::abs(eval_symbol(spec, freqs[i], vg.at(k)));
    });
    std::vector<double> wv(M);
    for (std::size_t k = 0; k < M; ++k) wv[k] = weight(vg.at(k));

    const degeneracy::SetMeasurer measurer(spec, params.omega_samples);

    // spectra of every slice of every field with the x-mean removed
    struct Prepared {
        std::vector<std::complex<double>> spectra;  // [k * K + i]
        double norm = 0.0;
    };
    std::vector<Prepared> prep(battery.size());
    parallel_for(battery.size(), [&](std::size_t b) {
        fft::RealFft local(g);
        auto& pr = prep[b];
        pr.spectra.resize(M * K);
        double s = 0.0;
        std::vector<double> centred(g.size());
        for (std::size_t k = 0; k < M; ++k) {
            const double* sl = battery[b].slice(k);
            double mean = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) mean += sl[i];
            mean /= static_cast<double>(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                centred[i] = sl[i] - mean;
                s += std::pow(std::fabs(centred[i]), p);
            }
            local.forward(centred.data(), pr.spectra.data() + k * K);
            pr.spectra[k * K] = 0.0;
        }
        pr.norm = std::pow(s * g.cell_volume() * dv, 1.0 / p);
    });

    std::vector<MultiplierRow> rows;
    for (double delta : deltas) {
        if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("delta must be positive and finite");
        MultiplierRow row;
        row.delta = delta;
        std::vector<double> om(K, 0.0);
        parallel_for(K, [&](std::size_t i) {
            if (i == 0) return;  // zero frequency carries no velocity averaging
            om[i] = bump == Bump::disc ? measurer.measure(freqs[i], 2.0 * delta)
                                       : measurer.shell_measure(freqs[i], 0.5 * delta, 2.0 * delta);
        });
        row.omega_sup = *std::max_element(om.begin(), om.end());
        row.uninformative = row.omega_sup >= 0.9 * spec.interval().length();

        std::vector<double> psi(K * M);
        for (std::size_t q = 0; q < K * M; ++q) psi[q] = bump_value(bump, absL[q] / delta);

        std::vector<double> ratios(battery.size(), 0.0);
        parallel_for(battery.size(), [&](std::size_t b) {
            fft::RealFft local(g);
            std::vector<std::complex<double>> avg(K, 0.0);
            const auto& sp = prep[b].spectra;
            for (std::size_t k = 0; k < M; ++k) {
                const double w = wv[k] * dv;
                if (w == 0.0) continue;
                for (std::size_t i = 1; i < K; ++i) avg[i] += w * psi[i * M + k] * sp[k * K + i];
            }
            std::vector<double> gx(g.size());
            local.inverse(avg.data(), gx.data());
            const double num = ScalarField(g, gx).lp_norm(p);
            if (num == 0.0) return;
            const double den = std::pow(row.omega_sup, inv_pc) * prep[b].norm;
            ratios[b] = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
        });
        row.max_ratio = *std::max_element(ratios.begin(), ratios.end());
        rows.push_back(row);
    }
    return rows;
}

XVField random_xv_field(const GridLayout& layout, const VelocityGrid& vgrid, std::uint64_t seed, int k_cut) {
    if (k_cut < 1) throw InputError("k_cut must be at least 1");
    if (static_cast<std::size_t>(2 * k_cut) >= layout.n) throw InputError("k_cut exceeds the grid resolution");
    XVField f(layout, vgrid);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double two_pi_over_L = 2.0 * std::numbers::pi / layout.L;
    const std::size_t n = layout.n;
    for (std::size_t m = 0; m < vgrid.m; ++m) {
        double* sl = f.slice(m);
        if (layout.dim == 1) {
            for (int k = 1; k <= k_cut; ++k) {
                const double a = normal(rng), b = normal(rng);
                for (std::size_t i = 0; i < n; ++i) {
                    const double th = two_pi_over_L * k * static_cast<double>(i) * layout.dx();
                    sl[i] += a * std::cos(th) + b * std::sin(th);
                }
            }
        } else {
            for (int k1 = -k_cut; k1 <= k_cut; ++k1)
                for (int k2 = 0; k2 <= k_cut; ++k2) {
                    if (k2 == 0 && k1 <= 0) continue;
                    const double a = normal(rng), b = normal(rng);
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j) {
                            const double th = two_pi_over_L * layout.dx() *
                                              (k1 * static_cast<double>(i) + k2 * static_cast<double>(j));
                            sl[i * n + j] += a * std::cos(th) + b * std::sin(th);
                        }
                }
        }
    }
    return f;
}

}  // namespace velavg::lp
