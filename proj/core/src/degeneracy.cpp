#include "velavg/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "velavg/error.hpp"
#include "velavg/parallel.hpp"
#include "velavg/regression.hpp"

namespace velavg::degeneracy {
namespace {

constexpr double kPi = std::numbers::pi;

/// Coefficients tabulated on the midpoint grid of the velocity interval.
struct Sampled {
    int d = 1;
    bool time = false;
    double h = 0.0;
    std::vector<double> v;
    std::vector<std::vector<double>> a;  // a[j][i]
    std::vector<std::vector<double>> b;  // b[j*d+k][i]
    std::vector<bool> active_a, active_b;
};

Sampled tabulate(const SymbolSpec& spec, std::size_t n) {
    if (n < 256) throw InputError(fmt::format("n_samples must be at least 256, got {}", n));
    Sampled s;
    s.d = spec.dim();
    s.time = spec.includes_time();
    s.h = spec.interval().length() / static_cast<double>(n);
    s.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.v[i] = spec.interval().lo + (static_cast<double>(i) + 0.5) * s.h;
    for (int j = 0; j < s.d; ++j) {
        const auto& f = spec.a(j);
        s.active_a.push_back(!f.is_zero());
        std::vector<double> col(n, 0.0);
        if (!f.is_zero())
            for (std::size_t i = 0; i < n; ++i) col[i] = f(s.v[i]);
        s.a.push_back(std::move(col));
    }
    for (int j = 0; j < s.d; ++j)
        for (int k = 0; k < s.d; ++k) {
            const auto& f = spec.b(j, k);
            s.active_b.push_back(!f.is_zero());
            std::vector<double> col(n, 0.0);
            if (!f.is_zero())
                for (std::size_t i = 0; i < n; ++i) col[i] = f(s.v[i]);
            s.b.push_back(std::move(col));
        }
    return s;
}

void abs_symbol(const Sampled& s, const FrequencyPoint& fp, std::vector<double>& out) {
    const std::size_t n = s.v.size();
    out.assign(n, 0.0);
    std::vector<double> re(n, 0.0), im(n, s.time ? fp.tau : 0.0);
    for (int j = 0; j < s.d; ++j) {
        const double x = fp.xi[static_cast<std::size_t>(j)];
        if (!s.active_a[static_cast<std::size_t>(j)] || x == 0.0) continue;
        const auto& col = s.a[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < n; ++i) im[i] += col[i] * x;
    }
    for (int j = 0; j < s.d; ++j)
        for (int k = 0; k < s.d; ++k) {
            const auto idx = static_cast<std::size_t>(j * s.d + k);
            const double w = fp.xi[static_cast<std::size_t>(j)] * fp.xi[static_cast<std::size_t>(k)];
            if (!s.active_b[idx] || w == 0.0) continue;
            const auto& col = s.b[idx];
            for (std::size_t i = 0; i < n; ++i) re[i] += col[i] * w;
        }
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

/// Trapezoidal fraction rule: half cells at both ends follow the nearest sample,
/// interior cells count the fraction where the linear interpolant is <= delta.
double measure_from(const std::vector<double>& absL, double delta, double h) {
    const std::size_t n = absL.size();
    double m = 0.0;
    if (absL.front() <= delta) m += 0.5 * h;
    if (absL.back() <= delta) m += 0.5 * h;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double g0 = absL[i] - delta;
        const double g1 = absL[i + 1] - delta;
        if (g0 <= 0.0 && g1 <= 0.0) {
            m += h;
        } else if (g0 <= 0.0) {
            m += h * (-g0) / (g1 - g0);
        } else if (g1 <= 0.0) {
            m += h * (-g1) / (g0 - g1);
        }
    }
    return m;
}

int sphere_dim(const SymbolSpec& spec) { return spec.dim() + (spec.includes_time() ? 1 : 0); }

double snap(double x) { return std::fabs(x) < 1e-15 ? 0.0 : x; }

/// Direction parameters: m = 1 uses p0 in {0, pi}; m = 2 an angle; m = 3 polar/azimuth
/// angles with the polar axis along the first coordinate.
FrequencyPoint point_from(double p0, double p1, int m, bool time, double J) {
    std::array<double, 3> u{};
    if (m == 1) {
        u[0] = std::cos(p0) >= 0 ? 1.0 : -1.0;
    } else if (m == 2) {
        u[0] = snap(std::cos(p0));
        u[1] = snap(std::sin(p0));
    } else {
        u[0] = snap(std::cos(p0));
        u[1] = snap(std::sin(p0) * std::cos(p1));
        u[2] = snap(std::sin(p0) * std::sin(p1));
    }
    FrequencyPoint fp;
    if (time) {
        fp.tau = J * u[0];
        fp.xi = {J * u[1], J * u[2]};
    } else {
        fp.xi = {J * u[0], J * u[1]};
    }
    return fp;
}

struct Direction {
    double p0 = 0.0;
    double p1 = 0.0;
};

std::vector<Direction> coarse_directions(int m, std::size_t samples, double& spacing) {
    std::vector<Direction> dirs;
    auto round8 = [](std::size_t k) { return ((std::max<std::size_t>(k, 8) + 7) / 8) * 8; };
    if (m == 1) {
        dirs = {{0.0, 0.0}, {kPi, 0.0}};
        spacing = 0.0;
    } else if (m == 2) {
        const std::size_t K = round8(samples);
        for (std::size_t k = 0; k < K; ++k) dirs.push_back({2.0 * kPi * static_cast<double>(k) / K, 0.0});
        spacing = 2.0 * kPi / static_cast<double>(K);
    } else {
        const std::size_t K = samples;
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < K; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(K);
            dirs.push_back({std::acos(z), std::fmod(golden * static_cast<double>(i), 2.0 * kPi)});
        }
        const std::size_t E = round8(static_cast<std::size_t>(2.0 * std::sqrt(static_cast<double>(K))));
        for (std::size_t k = 0; k < E; ++k) dirs.push_back({kPi / 2.0, 2.0 * kPi * static_cast<double>(k) / E});
        dirs.push_back({0.0, 0.0});
        dirs.push_back({kPi, 0.0});
        spacing = std::sqrt(4.0 * kPi / static_cast<double>(K));
    }
    return dirs;
}

/// Directions along which a pure convection symbol has high-order contact with zero:
/// the least-squares null vector of (1, a(v)) (or a(v) without time) over velocity windows.
std::vector<Direction> contact_directions(const Sampled& s, int m) {
    std::vector<Direction> out;
    const std::size_t n = s.v.size();
    for (int k = 1; k <= 6; ++k) {
        const std::size_t half = std::max<std::size_t>(n >> (k + 1), 2);
        for (int c = 0; c <= 16; ++c) {
            const std::size_t centre = (n - 1) * static_cast<std::size_t>(c) / 16;
            const std::size_t lo = centre > half ? centre - half : 0, hi = std::min(n - 1, centre + half);
            const std::size_t stride = std::max<std::size_t>((hi - lo) / 256, 1);
            std::vector<std::size_t> rows;
            for (std::size_t i = lo; i <= hi; i += stride) rows.push_back(i);
            Eigen::MatrixXd A(static_cast<long>(rows.size()), m);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                int col = 0;
                if (s.time) A(static_cast<long>(r), col++) = 1.0;
                for (int j = 0; col < m; ++j) A(static_cast<long>(r), col++) = s.a[static_cast<std::size_t>(j)][rows[r]];
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
            const Eigen::VectorXd u = svd.matrixV().col(m - 1);
            if (m == 2) {
                out.push_back({std::atan2(u[1], u[0]), 0.0});
            } else {
                out.push_back({std::acos(std::clamp(u[0], -1.0, 1.0)), std::atan2(u[2], u[1])});
            }
        }
    }
    return out;
}

double sup_symbol_v(const SymbolSpec& spec, const Sampled& s, const FrequencyPoint& fp,
                    const std::vector<double>& absL, double delta, std::size_t& count) {
    const auto kinks = spec.kinks();
    const double hv = spec.h_v();
    double sup = 0.0;
    count = 0;
    for (std::size_t i = 0; i < absL.size(); ++i) {
        if (absL[i] > delta) continue;
        ++count;
        const double v = s.v[i];
        bool near = false;
        for (double z : kinks) near |= std::fabs(v - z) < hv;
        if (near) continue;
        const auto d = eval_symbol_v(spec, fp, v);
        if (d.nondifferentiable) continue;
        sup = std::max(sup, std::abs(d.value));
    }
    return sup;
}

}  // namespace

std::string to_string(ProfileStatus s) {
    switch (s) {
        case ProfileStatus::fitted: return "fitted";
        case ProfileStatus::analytic: return "analytic";
        case ProfileStatus::degenerate: return "degenerate";
        case ProfileStatus::trivially_nondegenerate: return "trivially-nondegenerate";
    }
    return "unknown";
}

double omega_set_measure(const SymbolSpec& spec, const FrequencyPoint& fp, double delta, std::size_t n_samples) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("delta must be positive and finite");
    if (!(fp.magnitude(spec.dim(), spec.includes_time()) > 0.0))
        throw InputError("frequency point must be nonzero");
    const Sampled s = tabulate(spec, n_samples);
    std::vector<double> absL;
    abs_symbol(s, fp, absL);
    return measure_from(absL, delta, s.h);
}

struct SetMeasurer::Impl {
    Sampled s;
};

SetMeasurer::SetMeasurer(const SymbolSpec& spec, std::size_t n_samples)
    : impl_(std::make_unique<Impl>(Impl{tabulate(spec, n_samples)})) {}
SetMeasurer::~SetMeasurer() = default;
SetMeasurer::SetMeasurer(SetMeasurer&&) noexcept = default;
SetMeasurer& SetMeasurer::operator=(SetMeasurer&&) noexcept = default;

double SetMeasurer::measure(const FrequencyPoint& fp, double delta) const {
    std::vector<double> absL;
    abs_symbol(impl_->s, fp, absL);
    return measure_from(absL, delta, impl_->s.h);
}

double SetMeasurer::shell_measure(const FrequencyPoint& fp, double lo, double hi) const {
    std::vector<double> absL;
    abs_symbol(impl_->s, fp, absL);
    return measure_from(absL, hi, impl_->s.h) - measure_from(absL, lo, impl_->s.h);
}

OmegaMeasurement omega_sup(const SymbolSpec& spec, double J, double delta, const SamplingParams& params) {
    return omega_sup_grid(spec, J, {delta}, params).front();
}

std::vector<OmegaMeasurement> omega_sup_grid(const SymbolSpec& spec, double J, const std::vector<double>& deltas,
                                             const SamplingParams& params) {
    if (!(J > 0.0) || !std::isfinite(J)) throw InputError("J must be positive and finite");
    if (params.sphere_samples < 64) throw InputError("sphere_samples must be at least 64");
    if (deltas.empty()) return {};
    for (double d : deltas)
        if (!(d > 0.0) || !std::isfinite(d)) throw InputError("delta must be positive and finite");

    const Sampled s = tabulate(spec, params.n_samples);
    const int m = sphere_dim(spec);
    const bool time = spec.includes_time();
    const double full = spec.interval().length();
    double spacing = 0.0;
    auto dirs = coarse_directions(m, params.sphere_samples, spacing);
    if (m > 1 && !spec.has_diffusion()) {
        const auto extra = contact_directions(s, m);
        dirs.insert(dirs.end(), extra.begin(), extra.end());
    }

    std::vector<std::size_t> order(deltas.size());
    std::iota(order.begin(), order.end(), 0);
    // largest delta first: its basin is wide, and the maximiser is carried down as delta shrinks
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return deltas[x] > deltas[y]; });

    // coarse pass: every direction, every delta
    std::vector<std::vector<double>> coarse(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t k) {
        std::vector<double> absL;
        abs_symbol(s, point_from(dirs[k].p0, dirs[k].p1, m, time, J), absL);
        coarse[k].resize(deltas.size());
        for (std::size_t q = 0; q < deltas.size(); ++q) coarse[k][q] = measure_from(absL, deltas[q], s.h);
    });

    std::vector<OmegaMeasurement> out(deltas.size());
    std::vector<Direction> found(deltas.size());
    std::vector<double> absL;
    std::optional<Direction> carried;
    for (std::size_t q : order) {
        const double delta = deltas[q];
        auto eval = [&](const Direction& dir) {
            abs_symbol(s, point_from(dir.p0, dir.p1, m, time, J), absL);
            return measure_from(absL, delta, s.h);
        };
        std::size_t best_k = 0;
        for (std::size_t k = 1; k < dirs.size(); ++k)
            if (coarse[k][q] > coarse[best_k][q]) best_k = k;
        Direction best = dirs[best_k];
        double best_m = coarse[best_k][q];
        if (carried) {
            const double mc = eval(*carried);
            if (mc > best_m) {
                best_m = mc;
                best = *carried;
            }
        }

        // local pattern search with shrinking steps
        double step = spacing;
        for (int level = 0; m > 1 && level < params.refine_levels && best_m < full; ++level) {
            for (int moves = 0; moves < 64; ++moves) {
                std::vector<Direction> nb;
                if (m == 2) {
                    nb = {{best.p0 + step, 0.0}, {best.p0 - step, 0.0}};
                } else {
                    const double sp = step / std::max(std::sin(best.p0), 0.05);
                    for (int a = -1; a <= 1; ++a)
                        for (int b = -1; b <= 1; ++b)
                            if (a != 0 || b != 0) nb.push_back({best.p0 + a * step, best.p1 + b * sp});
                }
                double cand_m = best_m;
                Direction cand = best;
                for (const auto& dnb : nb) {
                    const double mm = eval(dnb);
                    if (mm > cand_m) {
                        cand_m = mm;
                        cand = dnb;
                    }
                }
                if (!(cand_m > best_m)) break;
                best_m = cand_m;
                best = cand;
            }
            step *= 0.5;
        }
        carried = best;
        found[q] = best;
    }

    // a maximiser for a smaller delta is a candidate for every larger one (keeps the measures monotone)
    for (std::size_t r = order.size(); r-- > 0;) {
        const std::size_t q = order[r];
        OmegaMeasurement& om = out[q];
        om.J = J;
        om.delta = deltas[q];
        std::vector<Direction> cands{found[q]};
        if (r + 1 < order.size()) cands.push_back(found[order[r + 1]]);
        double best_m = -1.0;
        for (const auto& c : cands) {
            abs_symbol(s, point_from(c.p0, c.p1, m, time, J), absL);
            const double mm = measure_from(absL, om.delta, s.h);
            if (mm > best_m) {
                best_m = mm;
                found[q] = c;
            }
        }
        om.argmax = point_from(found[q].p0, found[q].p1, m, time, J);
        abs_symbol(s, om.argmax, absL);
        om.measure = measure_from(absL, om.delta, s.h);
        om.sup_symbol_v = sup_symbol_v(spec, s, om.argmax, absL, om.delta, om.samples_in_set);
    }
    return out;
}

std::vector<double> dyadic_grid(int lo_exponent, int hi_exponent) {
    if (hi_exponent < lo_exponent) throw InputError("dyadic grid: hi < lo");
    std::vector<double> g;
    for (int e = lo_exponent; e <= hi_exponent; ++e) g.push_back(std::ldexp(1.0, e));
    return g;
}

namespace {

/// Homogeneity degree used when the J grid is a singleton.
double homogeneous_degree(const SymbolSpec& spec) {
    const bool conv = spec.has_convection();
    const bool diff = spec.has_diffusion();
    if (spec.declared_degrees()) {
        const auto& d = *spec.declared_degrees();
        if (conv && diff && d.convection != d.diffusion)
            throw InputError("homogeneous mode needs a single homogeneity degree");
        return conv ? d.convection : d.diffusion;
    }
    if (conv && !diff) return 1.0;
    if (diff && !conv && !spec.includes_time()) return 2.0;
    throw InputError("homogeneous mode needs a homogeneous symbol or declared degrees; supply a J grid");
}

}  // namespace

DegeneracyProfile fit_degeneracy(const SymbolSpec& spec, const std::vector<double>& delta_grid,
                                 const std::vector<double>& J_grid, const SamplingParams& params) {
    if (delta_grid.size() < 3) throw InputError("delta grid needs at least three values");
    if (J_grid.empty()) throw InputError("J grid is empty");
    std::vector<double> deltas = delta_grid;
    std::sort(deltas.begin(), deltas.end());
    std::vector<double> Js = J_grid;
    std::sort(Js.begin(), Js.end());
    const bool homogeneous = Js.size() == 1;

    DegeneracyProfile prof;
    for (double J : Js) {
        auto row = omega_sup_grid(spec, J, deltas, params);
        prof.grid.insert(prof.grid.end(), row.begin(), row.end());
    }
    prof.used_in_fit.assign(prof.grid.size(), false);

    const double full = spec.interval().length();
    const double h = full / static_cast<double>(params.n_samples);
    const double floor_measure = 8.0 * h;

    if (std::all_of(prof.grid.begin(), prof.grid.end(), [](const auto& o) { return o.measure == 0.0; })) {
        prof.status = ProfileStatus::trivially_nondegenerate;
        prof.alpha = std::numeric_limits<double>::quiet_NaN();
        prof.note = "set is empty at every grid point";
        return prof;
    }

    // failure to decay at the smallest deltas of the smallest J
    {
        const double m0 = prof.grid[0].measure, m1 = prof.grid[1].measure, m2 = prof.grid[2].measure;
        const double hi = std::max({m0, m1, m2});
        const double lo = std::min({m0, m1, m2});
        if (lo > floor_measure && (hi - lo) < 0.05 * hi) {
            prof.status = ProfileStatus::degenerate;
            prof.degenerate_flag = true;
            prof.alpha = 0.0;
            prof.note = fmt::format("measure does not decay: {:.6g}, {:.6g}, {:.6g} at the three smallest deltas", m0,
                                    m1, m2);
            return prof;
        }
    }

    std::vector<std::vector<double>> xm, xs;
    std::vector<double> ym, ys;
    for (std::size_t i = 0; i < prof.grid.size(); ++i) {
        const auto& o = prof.grid[i];
        if (o.measure < floor_measure || o.measure > 0.5 * full) continue;
        prof.used_in_fit[i] = true;
        std::vector<double> row{std::log(o.delta)};
        if (!homogeneous) row.push_back(std::log(o.J));
        xm.push_back(row);
        ym.push_back(std::log(o.measure));
        if (o.sup_symbol_v > 0.0) {
            xs.push_back(row);
            ys.push_back(std::log(o.sup_symbol_v));
        }
    }
    const std::size_t need = homogeneous ? 3 : 4;
    if (ym.size() < need || ys.size() < need)
        throw InsufficientResolution(
            fmt::format("only {} resolved grid cells for the degeneracy fit (need {})", ym.size(), need));

    const LinearFit fm = trimmed_least_squares(xm, ym, 0.1);
    const LinearFit fs = trimmed_least_squares(xs, ys, 0.1);
    prof.status = ProfileStatus::fitted;
    prof.alpha = fm.coef[1];
    prof.alpha_stderr = fm.stderr_[1];
    prof.r_squared_measure = fm.r_squared;
    prof.mu = fs.coef[1];
    prof.mu_stderr = fs.stderr_[1];
    prof.r_squared_sup = fs.r_squared;

    if (homogeneous) {
        prof.beta = homogeneous_degree(spec);
        prof.beta_stderr = 0.0;
        prof.lambda = 1.0 - prof.mu;
        prof.lambda_stderr = prof.mu_stderr;
    } else {
        const double c1 = fm.coef[1], c2 = fm.coef[2];
        prof.beta = -c2 / c1;
        const double g1 = c2 / (c1 * c1), g2 = -1.0 / c1;
        const double var = g1 * g1 * fm.cov(1, 1) + g2 * g2 * fm.cov(2, 2) + 2.0 * g1 * g2 * fm.cov(1, 2);
        prof.beta_stderr = std::sqrt(std::max(0.0, var));
        const double bl = fs.coef[2];
        prof.lambda = bl / prof.beta;
        const double vl = fs.cov(2, 2) / (prof.beta * prof.beta) +
                          std::pow(bl / (prof.beta * prof.beta), 2) * prof.beta_stderr * prof.beta_stderr;
        prof.lambda_stderr = std::sqrt(std::max(0.0, vl));
    }
    if (prof.mu < 0.0 || prof.mu > 1.0) {
        prof.mu = std::clamp(prof.mu, 0.0, 1.0);
        prof.mu_clamped = true;
    }
    return prof;
}

namespace {

DegeneracyProfile closed_form(double alpha, double beta, double mu, double lambda, std::string note) {
    DegeneracyProfile p;
    p.status = ProfileStatus::analytic;
    p.alpha = alpha;
    p.beta = beta;
    p.mu = mu;
    p.lambda = lambda;
    p.note = std::move(note);
    return p;
}

DegeneracyProfile degenerate_profile(std::string note) {
    DegeneracyProfile p;
    p.status = ProfileStatus::degenerate;
    p.degenerate_flag = true;
    p.alpha = 0.0;
    p.note = std::move(note);
    return p;
}

/// Exponent of a power-law coefficient, or nullopt.
std::optional<double> power_exponent(const VelocityFunction& f) {
    if (!f.is_power_kind() || f.is_zero()) return std::nullopt;
    return f.exponent();
}

DegeneracyProfile convection_profile(double l) {
    return closed_form(1.0 / l, 1.0, 1.0 - 1.0 / l, 1.0 / l, fmt::format("power-law convection, degree {}", l));
}

DegeneracyProfile diffusion_profile(double n) {
    return closed_form(1.0 / n, 2.0, 1.0 - 1.0 / n, 1.0 / n, fmt::format("power-law diffusion, degree {}", n));
}

DegeneracyProfile mixed_profile(double l, double n) {
    if (n <= l) {
        auto p = diffusion_profile(n);
        p.note = fmt::format("convection degree {}, diffusion degree {}: diffusion dominated", l, n);
        return p;
    }
    if (n >= 2.0 * l) {
        auto p = convection_profile(l);
        p.note = fmt::format("convection degree {}, diffusion degree {}: convection dominated", l, n);
        return p;
    }
    const double zeta = n / l - 1.0;
    const double alpha = (1.0 - zeta) / l + zeta / n;
    const double beta_alpha = (1.0 - zeta) / l + 2.0 * zeta / n;
    return closed_form(alpha, beta_alpha / alpha, 1.0 - alpha, alpha,
                       fmt::format("convection degree {}, diffusion degree {}: intermediate (zeta = {})", l, n, zeta));
}

}  // namespace

DegeneracyProfile analytic_profile(const SymbolSpec& spec) {
    const bool conv = spec.has_convection();
    const bool diff = spec.has_diffusion();
    if (spec.dim() == 1) {
        const auto l = power_exponent(spec.a(0));
        const auto n = power_exponent(spec.b(0, 0));
        if (conv && !diff && l && *l >= 1.0) return convection_profile(*l);
        if (diff && !conv && n && *n > 0.0) return diffusion_profile(*n);
        if (conv && diff && l && n && *l >= 1.0 && *n > 0.0) return mixed_profile(*l, *n);
        throw InputError("no closed-form profile for this 1D symbol");
    }

    const auto& a1 = spec.a(0);
    const auto& a2 = spec.a(1);
    const auto& b11 = spec.b(0, 0);
    const auto& b12 = spec.b(0, 1);
    const auto& b22 = spec.b(1, 1);
    const bool rank_one = diff && b11 == b22 && !b12.is_zero() && b12.same_shape(b11) &&
                          std::fabs(b12.scale()) == std::fabs(b11.scale());
    const bool isotropic = diff && b11 == b22 && b12.is_zero();

    if (conv && !diff) {
        const auto l = power_exponent(a1);
        const auto m = power_exponent(a2);
        if (l && m && *l >= 1.0 && *m >= 1.0) {
            if (a1 == a2) return degenerate_profile("identical flux components: a(v) is parallel to a fixed vector");
            const double worst = std::max(*l, *m);
            auto p = convection_profile(worst);
            p.note = fmt::format("2D power-law flux, degrees ({}, {})", *l, *m);
            return p;
        }
        // a1 = cos v (flux sin rho) against a2 = v^2: the v^2 terms cancel at v = 0
        const Interval I = spec.interval();
        if (a1.kind() == VelocityFunction::Kind::sine && m && *m == 2.0 && I.lo <= 0.0 && I.hi >= 0.0 &&
            std::fabs(a1.derivative(0.0).value) < 1e-12)
            return closed_form(0.25, 1.0, 0.75, 0.25, "cosine/quadratic flux pair: fourth-order contact");
        throw InputError("no closed-form profile for this 2D flux");
    }
    if (diff && !conv) {
        const auto n = power_exponent(b11);
        if (rank_one) return degenerate_profile("rank-one diffusion with no convection");
        if (isotropic && n) return diffusion_profile(*n);
        throw InputError("no closed-form profile for this 2D diffusion");
    }
    // convection and diffusion in 2D: identical power-law flux components with rank-one diffusion
    const auto l = power_exponent(a1);
    const auto n = power_exponent(b11);
    if (l && n && a1 == a2 && rank_one) {
        // the kernel of b must not coincide with the direction killed by the flux
        const bool kernel_matches_flux = b12.scale() == b11.scale();
        if (kernel_matches_flux) return degenerate_profile("flux and diffusion vanish on the same direction");
        if (*n >= 2.0 * *l) {
            const double alpha = 1.0 / *n;
            const double mu = (*l - 1.0) / *n;
            return closed_form(alpha, 2.0, mu, 0.5 - mu,
                               fmt::format("aligned flux (degree {}) with rank-one diffusion (degree {})", *l, *n));
        }
        // the flux direction carries no gain (mu + lambda = 2)
        const double mu = (*n - 1.0) / *l;
        return closed_form(1.0 / *l, 1.0, mu, 2.0 - mu,
                           fmt::format("aligned flux (degree {}) dominates rank-one diffusion (degree {})", *l, *n));
    }
    throw InputError("no closed-form profile for this symbol");
}

}  // namespace velavg::degeneracy
