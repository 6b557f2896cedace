#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "flux.hpp"
#include "velavg/error.hpp"
#include "velavg/pde.hpp"

namespace velavg::pde {
namespace detail {

KineticGrid kinetic_grid(double data_min, double data_max, std::size_t m) {
    KineticGrid g;
    g.lo = std::min(0.0, data_min);
    g.hi = std::max(0.0, data_max);
    if (!(g.hi > g.lo)) g.hi = g.lo + 1.0;
    g.m = m;
    return g;
}

double sampled_max_abs(const VelocityFunction& f, double lo, double hi) {
    if (f.is_zero()) return 0.0;
    constexpr int n = 4096;
    double m = std::max(std::fabs(f(lo)), std::fabs(f(hi)));
    for (int i = 1; i < n; ++i) m = std::max(m, std::fabs(f(lo + (hi - lo) * i / n)));
    return m;
}

NumericalFlux::NumericalFlux(const VelocityFunction& a, Scheme scheme, double data_min, double data_max,
                             const KineticGrid* kgrid)
    : a_(a), scheme_(scheme), active_(!a.is_zero()) {
    if (!active_) return;
    if (scheme_ == Scheme::kinetic_bgk) {
        if (!kgrid) throw InputError("kinetic flux needs a velocity grid");
        kgrid_ = *kgrid;
        prefix_pos_.assign(kgrid_.m + 1, 0.0);
        prefix_neg_.assign(kgrid_.m + 1, 0.0);
        for (std::size_t k = 0; k < kgrid_.m; ++k) {
            const double s = a_(kgrid_.at(k));
            max_speed_ = std::max(max_speed_, std::fabs(s));
            prefix_pos_[k + 1] = prefix_pos_[k] + std::max(s, 0.0) * kgrid_.dv();
            prefix_neg_[k + 1] = prefix_neg_[k] + std::min(s, 0.0) * kgrid_.dv();
        }
        return;
    }
    const double pad = 1e-9 * std::max(1.0, data_max - data_min);
    const double lo = std::min(0.0, data_min) - pad;
    const double hi = std::max(0.0, data_max) + pad;
    zeros_ = a_.zeros_in(lo, hi);
    for (double z : zeros_) zero_values_.push_back(a_.antiderivative(z));
    max_speed_ = sampled_max_abs(a_, data_min, data_max);
}

double NumericalFlux::positive_part(double u) const {
    // integral of max(a, 0) from 0 to u, split at the zeros of a
    const double lo = std::min(0.0, u), hi = std::max(0.0, u);
    if (lo == hi) return 0.0;
    double s = 0.0;
    double left = lo;
    double A_left = a_.antiderivative(lo);
    auto segment = [&](double right, double A_right) {
        if (right > left && a_(0.5 * (left + right)) > 0.0) s += A_right - A_left;
        left = right;
        A_left = A_right;
    };
    for (std::size_t k = 0; k < zeros_.size(); ++k)
        if (zeros_[k] > lo && zeros_[k] < hi) segment(zeros_[k], zero_values_[k]);
    segment(hi, a_.antiderivative(hi));
    return u >= 0.0 ? s : -s;
}

double NumericalFlux::kinetic_part(double u, bool positive) const {
    const auto& pre = positive ? prefix_pos_ : prefix_neg_;
    const double dv = kgrid_.dv();
    // number of nodes with v_k <= x is floor((x - lo) / dv + 1/2), clamped
    auto count_le = [&](double x) {
        const double c = std::floor((x - kgrid_.lo) / dv + 0.5);
        return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(kgrid_.m)));
    };
    const std::size_t z = count_le(0.0);  // nodes with v <= 0 (no node sits at 0 exactly unless by design)
    if (u > 0.0) {
        const std::size_t top = count_le(u);
        return top > z ? pre[top] - pre[z] : 0.0;
    }
    if (u < 0.0) {
        // nodes with u <= v < 0
        const double c = std::ceil((u - kgrid_.lo) / dv - 0.5);
        const std::size_t first = static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(kgrid_.m)));
        return z > first ? -(pre[z] - pre[first]) : 0.0;
    }
    return 0.0;
}

double NumericalFlux::from_primitive(double u, double w, double Au, double Aw) const {
    if (scheme_ == Scheme::lax_friedrichs) return 0.5 * (Au + Aw) - 0.5 * max_speed_ * (w - u);
    if (u <= w) {
        double f = std::min(Au, Aw);
        for (std::size_t k = 0; k < zeros_.size(); ++k)
            if (zeros_[k] > u && zeros_[k] < w) f = std::min(f, zero_values_[k]);
        return f;
    }
    double f = std::max(Au, Aw);
    for (std::size_t k = 0; k < zeros_.size(); ++k)
        if (zeros_[k] > w && zeros_[k] < u) f = std::max(f, zero_values_[k]);
    return f;
}

double NumericalFlux::operator()(double u, double w) const {
    if (!active_) return 0.0;
    switch (scheme_) {
        case Scheme::godunov:
        case Scheme::lax_friedrichs: return from_primitive(u, w, a_.antiderivative(u), a_.antiderivative(w));
        case Scheme::engquist_osher: {
            const double pu = positive_part(u);
            const double pw = positive_part(w);
            return pu + (a_.antiderivative(w) - pw);
        }
        case Scheme::kinetic_bgk: return kinetic_part(u, true) + kinetic_part(w, false);
    }
    return 0.0;
}

}  // namespace detail

Scheme parse_scheme(const std::string& name) {
    if (name == "godunov") return Scheme::godunov;
    if (name == "engquist-osher") return Scheme::engquist_osher;
    if (name == "lax-friedrichs") return Scheme::lax_friedrichs;
    if (name == "kinetic-bgk") return Scheme::kinetic_bgk;
    throw InputError(fmt::format("unknown scheme '{}'", name));
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::godunov: return "godunov";
        case Scheme::engquist_osher: return "engquist-osher";
        case Scheme::lax_friedrichs: return "lax-friedrichs";
        case Scheme::kinetic_bgk: return "kinetic-bgk";
    }
    return "unknown";
}

double Trajectory::relative_mass_drift() const {
    double drift = 0.0;
    const double m0 = snapshots.front().mass;
    for (const auto& s : snapshots) drift = std::max(drift, std::fabs(s.mass - m0));
    return drift / mass_scale;
}

namespace {

void validate_config(const SchemeConfig& cfg) {
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw InputError(fmt::format("cfl must lie in (0, 1], got {}", cfg.cfl));
    if (!(cfg.diffusion_cfl > 0.0 && cfg.diffusion_cfl <= 0.5))
        throw InputError(fmt::format("diffusion_cfl must lie in (0, 0.5], got {}", cfg.diffusion_cfl));
    if (!(cfg.final_time > 0.0) || !std::isfinite(cfg.final_time)) throw InputError("final time must be positive");
    for (double t : cfg.snapshot_times)
        if (!(t > 0.0 && t <= cfg.final_time)) throw InputError(fmt::format("snapshot time {} outside (0, T]", t));
}

void validate_data(const SymbolSpec& flux, const ScalarField& rho0) {
    if (rho0.values.size() != rho0.layout.size()) throw InputError("initial data size does not match its layout");
    if (flux.dim() != rho0.layout.dim) throw InputError("flux and grid dimensions differ");
    for (double x : rho0.values)
        if (!std::isfinite(x)) throw InputError("initial data must be finite");
    const Interval I = flux.interval();
    if (!I.contains(rho0.min()) || !I.contains(rho0.max()))
        throw DomainError(fmt::format("data range [{}, {}] leaves the velocity interval [{}, {}]", rho0.min(),
                                      rho0.max(), I.lo, I.hi));
}

double max_eigen_b(const SymbolSpec& flux, double v) {
    if (flux.dim() == 1) return flux.b(0, 0)(v);
    const double a = flux.b(0, 0)(v), b = flux.b(0, 1)(v), c = flux.b(1, 1)(v);
    return 0.5 * (a + c) + std::hypot(0.5 * (a - c), b);
}

double min_eigen_b(const SymbolSpec& flux, double v) {
    if (flux.dim() == 1) return flux.b(0, 0)(v);
    const double a = flux.b(0, 0)(v), b = flux.b(0, 1)(v), c = flux.b(1, 1)(v);
    return 0.5 * (a + c) - std::hypot(0.5 * (a - c), b);
}

/// Shared explicit stepper; `kgrid` is used by the kinetic scheme only.
Trajectory run(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg, bool with_diffusion) {
    validate_config(cfg);
    validate_data(flux, rho0);
    const GridLayout g = rho0.layout;
    const int d = g.dim;
    const std::size_t n = g.n;
    const double dx = g.dx();

    Trajectory traj;
    traj.scheme = cfg.scheme;
    traj.layout = g;
    traj.data_min = rho0.min();
    traj.data_max = rho0.max();

    if (with_diffusion) {
        constexpr int samples = 2049;
        for (int i = 0; i < samples; ++i) {
            const double v = traj.data_min + (traj.data_max - traj.data_min) * i / (samples - 1);
            if (min_eigen_b(flux, v) < -1e-12)
                throw InputError(fmt::format("diffusion matrix is not positive semi-definite at rho = {}", v));
        }
    }

    detail::KineticGrid kg;
    if (cfg.scheme == Scheme::kinetic_bgk) {
        traj.bgk_velocities = cfg.bgk_velocities ? cfg.bgk_velocities : 2 * n;
        kg = detail::kinetic_grid(traj.data_min, traj.data_max, traj.bgk_velocities);
    }
    std::vector<detail::NumericalFlux> F;
    for (int j = 0; j < d; ++j)
        F.emplace_back(flux.a(j), cfg.scheme, traj.data_min, traj.data_max,
                       cfg.scheme == Scheme::kinetic_bgk ? &kg : nullptr);

    const double dt_max = stable_time_step(flux, g, traj.data_min, traj.data_max, cfg);
    traj.dt_max = dt_max;
    if (cfg.dt) {
        if (!(*cfg.dt > 0.0)) throw InputError("dt must be positive");
        if (*cfg.dt > dt_max * (1.0 + 1e-12))
            throw CflViolation(fmt::format("dt = {} exceeds the stable step {}", *cfg.dt, dt_max), dt_max);
    }
    if (cfg.scheme == Scheme::kinetic_bgk && cfg.bgk_relaxation > 0.0) {
        const double step = cfg.dt ? *cfg.dt : dt_max;
        if (cfg.bgk_relaxation > step) throw InputError("BGK relaxation time must not exceed the time step");
    }
    const double step_bound = cfg.dt ? *cfg.dt : dt_max;

    // diffusion terms; coefficients that differ only by a constant factor share one B evaluation
    struct DiffTerm {
        int j, k;
        std::size_t base;  // index into Bv
        double factor;     // B_jk = factor * Bv[base]
    };
    std::vector<DiffTerm> diff;
    std::vector<const VelocityFunction*> bases;
    if (with_diffusion)
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) {
                const VelocityFunction& b = flux.b(j, k);
                if (b.is_zero()) continue;
                std::size_t base = bases.size();
                for (std::size_t s = 0; s < bases.size(); ++s)
                    if (bases[s]->same_shape(b)) base = s;
                if (base == bases.size()) bases.push_back(&b);
                diff.push_back({j, k, base, b.scale() / bases[base]->scale()});
            }

    std::vector<double> rho = rho0.values;
    std::vector<double> next(rho.size());
    std::vector<double> Fx(rho.size()), Fy(rho.size());
    std::vector<std::vector<double>> Acell(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> Bv(bases.size(), std::vector<double>(rho.size()));
    std::vector<std::size_t> ip(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        ip[i] = (i + 1) % n;
        im[i] = (i + n - 1) % n;
    }

    auto step = [&](const std::vector<double>& cur, std::vector<double>& out, double dt) {
        const double lam = dt / dx;
        const double mu = dt / (dx * dx);
        const std::size_t cells = cur.size();
        for (int a = 0; a < d; ++a) {
            const auto& Fa = F[static_cast<std::size_t>(a)];
            if (!Fa.active() || !Fa.uses_primitive()) continue;
            auto& A = Acell[static_cast<std::size_t>(a)];
            A.resize(cells);
            for (std::size_t q = 0; q < cells; ++q) A[q] = Fa.primitive(cur[q]);
        }
        auto interface_flux = [&](int a, std::size_t q, std::size_t r) {
            const auto& Fa = F[static_cast<std::size_t>(a)];
            if (Fa.uses_primitive()) {
                const auto& A = Acell[static_cast<std::size_t>(a)];
                return Fa.from_primitive(cur[q], cur[r], A[q], A[r]);
            }
            return Fa(cur[q], cur[r]);
        };
        for (std::size_t s = 0; s < bases.size(); ++s)
            for (std::size_t q = 0; q < cells; ++q) Bv[s][q] = bases[s]->antiderivative(cur[q]);

        if (d == 1) {
            if (F[0].active())
                for (std::size_t i = 0; i < n; ++i) Fx[i] = interface_flux(0, i, ip[i]);
            for (std::size_t i = 0; i < n; ++i) out[i] = cur[i] - (F[0].active() ? lam * (Fx[i] - Fx[im[i]]) : 0.0);
            for (const auto& t : diff) {
                const auto& B = Bv[t.base];
                const double c = mu * t.factor;
                for (std::size_t i = 0; i < n; ++i) out[i] += c * (B[ip[i]] - 2.0 * B[i] + B[im[i]]);
            }
            return;
        }
        // 2D, unsplit
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i * n, rowp = ip[i] * n;
            for (std::size_t j = 0; j < n; ++j) {
                if (F[0].active()) Fx[row + j] = interface_flux(0, row + j, rowp + j);
                if (F[1].active()) Fy[row + j] = interface_flux(1, row + j, row + ip[j]);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i * n, rowm = im[i] * n;
            for (std::size_t j = 0; j < n; ++j) {
                double r = cur[row + j];
                if (F[0].active()) r -= lam * (Fx[row + j] - Fx[rowm + j]);
                if (F[1].active()) r -= lam * (Fy[row + j] - Fy[row + im[j]]);
                out[row + j] = r;
            }
        }
        for (const auto& t : diff) {
            const auto& B = Bv[t.base];
            const double c = mu * t.factor;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t row = i * n, rowp = ip[i] * n, rowm = im[i] * n;
                if (t.j == 0 && t.k == 0) {
                    for (std::size_t j = 0; j < n; ++j)
                        out[row + j] += c * (B[rowp + j] - 2.0 * B[row + j] + B[rowm + j]);
                } else if (t.j == 1 && t.k == 1) {
                    for (std::size_t j = 0; j < n; ++j)
                        out[row + j] += c * (B[row + ip[j]] - 2.0 * B[row + j] + B[row + im[j]]);
                } else {
                    // 2 d1 d2 B12 with the four-point cross stencil
                    for (std::size_t j = 0; j < n; ++j)
                        out[row + j] += c * 0.5 *
                                        (B[rowp + ip[j]] - B[rowp + im[j]] - B[rowm + ip[j]] + B[rowm + im[j]]);
                }
            }
        }
    };

    std::optional<detail::KineticRelaxation> relax;
    std::vector<double> fkin, ftmp;
    if (cfg.scheme == Scheme::kinetic_bgk && cfg.bgk_relaxation > 0.0) {
        relax.emplace(flux, g, kg);
        fkin = relax->equilibrium(rho);
    }
    auto advance = [&](const std::vector<double>& cur, std::vector<double>& out, double dt, std::vector<double>* f) {
        if (!relax) {
            step(cur, out, dt);
            return;
        }
        out = cur;
        relax->step(*f, out, dt, cfg.bgk_relaxation);
    };

    auto mass_of = [&](const std::vector<double>& r) {
        double s = 0.0;
        for (double x : r) s += x;
        return s * g.cell_volume();
    };
    double l1 = 0.0;
    for (double x : rho) l1 += std::fabs(x);
    l1 *= g.cell_volume();

    std::vector<double> stops = cfg.snapshot_times;
    stops.push_back(cfg.final_time);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    auto record = [&](double t, std::size_t k, double dt_next) {
        Snapshot s;
        s.t = t;
        s.step = k;
        s.field = ScalarField(g, rho, fmt::format("{} t={:.6g}", rho0.label, t));
        s.mass = mass_of(rho);
        if (cfg.store_successors) {
            ftmp = fkin;
            advance(rho, next, dt_next, &ftmp);
            s.successor = ScalarField(g, next, fmt::format("{} t={:.6g}", rho0.label, t + dt_next));
            s.successor_dt = dt_next;
        }
        traj.snapshots.push_back(std::move(s));
    };

    auto segment_dt = [&](double from, double to) {
        const double span = to - from;
        const double count = std::max(1.0, std::ceil(span / step_bound - 1e-9));
        return std::pair{static_cast<std::size_t>(count), span / count};
    };

    double t = 0.0;
    std::size_t k = 0;
    record(0.0, 0, segment_dt(0.0, stops.front()).second);
    for (std::size_t s = 0; s < stops.size(); ++s) {
        const auto [count, dt] = segment_dt(t, stops[s]);
        if (k + count > cfg.max_steps)
            throw InputError(fmt::format("run needs more than {} steps (dt = {})", cfg.max_steps, dt));
        for (std::size_t q = 0; q < count; ++q) {
            advance(rho, next, dt, &fkin);
            rho.swap(next);
            ++k;
        }
        t = stops[s];
        const double dt_next = s + 1 < stops.size() ? segment_dt(t, stops[s + 1]).second : dt;
        record(t, k, dt_next);
    }
    traj.steps = k;
    traj.mass_scale = std::max({std::fabs(traj.snapshots.front().mass), l1, std::numeric_limits<double>::min()});
    return traj;
}

}  // namespace

double stable_time_step(const SymbolSpec& flux, const GridLayout& g, double data_min, double data_max,
                        const SchemeConfig& cfg) {
    const double dx = g.dx();
    double conv = 0.0;
    double lo = data_min, hi = data_max;
    if (cfg.scheme == Scheme::kinetic_bgk) {
        lo = std::min(0.0, lo);
        hi = std::max(0.0, hi);
    }
    for (int j = 0; j < flux.dim(); ++j) conv += detail::sampled_max_abs(flux.a(j), lo, hi);
    double eig = 0.0, diag = 0.0;
    if (flux.has_diffusion()) {
        constexpr int samples = 2049;
        for (int i = 0; i < samples; ++i) {
            const double v = data_min + (data_max - data_min) * i / (samples - 1);
            eig = std::max(eig, max_eigen_b(flux, v));
        }
        for (int j = 0; j < flux.dim(); ++j) diag += detail::sampled_max_abs(flux.b(j, j), data_min, data_max);
    }
    double dt = std::numeric_limits<double>::infinity();
    if (conv > 0.0) dt = std::min(dt, cfg.cfl * dx / conv);
    if (eig > 0.0) dt = std::min(dt, cfg.diffusion_cfl * dx * dx / eig);
    if (conv > 0.0 || diag > 0.0) dt = std::min(dt, 1.0 / (conv / dx + 2.0 * diag / (dx * dx)));
    if (!std::isfinite(dt)) dt = cfg.final_time;
    return dt;
}

Trajectory solve_conservation_law(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg) {
    if (flux.has_diffusion()) throw InputError("conservation law solver got a nonzero diffusion matrix");
    if (cfg.scheme == Scheme::kinetic_bgk) return solve_kinetic_bgk(flux, rho0, cfg);
    return run(flux, rho0, cfg, false);
}

Trajectory solve_convection_diffusion(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg) {
    if (cfg.scheme == Scheme::kinetic_bgk) throw InputError("the kinetic scheme handles pure conservation laws only");
    return run(flux, rho0, cfg, true);
}

Trajectory solve_kinetic_bgk(const SymbolSpec& flux, const ScalarField& rho0, const SchemeConfig& cfg) {
    if (flux.has_diffusion()) throw InputError("the kinetic scheme handles pure conservation laws only");
    SchemeConfig c = cfg;
    c.scheme = Scheme::kinetic_bgk;
    return run(flux, rho0, c, false);
}

}  // namespace velavg::pde
