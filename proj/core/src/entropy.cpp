#include <algorithm>
#include <cmath>
#include <limits>

#include "flux.hpp"
#include "velavg/error.hpp"
#include "velavg/parallel.hpp"
#include "velavg/pde.hpp"

namespace velavg::pde {

double EntropyProductionField::column_mass(std::size_t s, std::size_t iv, std::size_t i0, std::size_t i1) const {
    if (layout.dim != 1) throw InputError("column_mass is defined for 1D grids");
    if (i1 > layout.n || i0 > i1) throw InputError("column range out of bounds");
    const double* m = slab(s, iv);
    double sum = 0.0;
    for (std::size_t i = i0; i < i1; ++i) sum += m[i];
    return sum * layout.dx();
}

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

EntropyProductionField entropy_production(const Trajectory& traj, const SymbolSpec& flux, std::size_t kruzkov_points) {
    if (kruzkov_points < 2) throw InputError("need at least two Kruzkov points");
    const GridLayout g = traj.layout;
    const std::size_t n = g.n;
    const std::size_t cells = g.size();
    const int d = g.dim;
    const double dx = g.dx();

    EntropyProductionField out;
    out.layout = g;
    for (std::size_t k = 0; k < kruzkov_points; ++k)
        out.v.push_back(traj.data_min + (traj.data_max - traj.data_min) * static_cast<double>(k) /
                                            static_cast<double>(kruzkov_points - 1));

    detail::KineticGrid kg;
    if (traj.scheme == Scheme::kinetic_bgk) kg = detail::kinetic_grid(traj.data_min, traj.data_max, traj.bgk_velocities);
    std::vector<detail::NumericalFlux> F;
    for (int j = 0; j < d; ++j)
        F.emplace_back(flux.a(j), traj.scheme, traj.data_min, traj.data_max,
                       traj.scheme == Scheme::kinetic_bgk ? &kg : nullptr);
    std::vector<const VelocityFunction*> B;  // B_11, B_12, B_22 (1D: B_11)
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) B.push_back(flux.has_diffusion() && !flux.b(j, k).is_zero() ? &flux.b(j, k) : nullptr);

    std::vector<const Snapshot*> slabs;
    for (const auto& s : traj.snapshots)
        if (s.successor) slabs.push_back(&s);
    if (slabs.empty()) throw InputError("trajectory has no successor states; enable store_successors");

    const std::size_t nv = out.v.size();
    out.values.assign(slabs.size() * nv * cells, 0.0);
    std::vector<double> floors(slabs.size() * nv, 0.0);

    // trapezoid weights over the Kruzkov parameters
    const double hv = nv > 1 ? (out.v.back() - out.v.front()) / static_cast<double>(nv - 1) : 0.0;

    parallel_for(slabs.size() * nv, [&](std::size_t job) {
        const std::size_t s = job / nv, iv = job % nv;
        const Snapshot& snap = *slabs[s];
        const double v = out.v[iv];
        const double dt = snap.successor_dt;
        const auto& r0 = snap.field.values;
        const auto& r1 = snap.successor->values;
        double* m = out.values.data() + (s * nv + iv) * cells;

        std::vector<double> G(static_cast<std::size_t>(d) * cells, 0.0);
        std::vector<std::vector<double>> Beta(B.size());
        double max_eta = 0.0, max_G = 0.0, max_B = 0.0;
        auto G_of = [&](int axis, double u, double w) {
            return F[static_cast<std::size_t>(axis)](std::max(u, v), std::max(w, v)) -
                   F[static_cast<std::size_t>(axis)](std::min(u, v), std::min(w, v));
        };
        for (std::size_t q = 0; q < cells; ++q) {
            max_eta = std::max({max_eta, std::fabs(r0[q] - v), std::fabs(r1[q] - v)});
            const std::size_t i = d == 1 ? q : q / n, j = d == 1 ? 0 : q % n;
            const std::size_t qx = d == 1 ? (i + 1) % n : ((i + 1) % n) * n + j;
            if (F[0].active()) G[q] = G_of(0, r0[q], r0[qx]);
            if (d == 2 && F[1].active()) G[cells + q] = G_of(1, r0[q], r0[i * n + (j + 1) % n]);
        }
        for (double x : G) max_G = std::max(max_G, std::fabs(x));
        for (std::size_t t = 0; t < B.size(); ++t) {
            if (!B[t]) continue;
            Beta[t].resize(cells);
            const double Bv = B[t]->antiderivative(v);
            for (std::size_t q = 0; q < cells; ++q) {
                Beta[t][q] = sgn(r0[q] - v) * (B[t]->antiderivative(r0[q]) - Bv);
                max_B = std::max(max_B, std::fabs(Beta[t][q]));
            }
        }
        const double lam = 1.0 / (2.0 * dx);
        const double mu = 1.0 / (2.0 * dx * dx);
        for (std::size_t q = 0; q < cells; ++q) {
            const std::size_t i = d == 1 ? q : q / n, j = d == 1 ? 0 : q % n;
            const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
            double val = -(std::fabs(r1[q] - v) - std::fabs(r0[q] - v)) / (2.0 * dt);
            if (d == 1) {
                val -= lam * (G[q] - G[im]);
                if (B[0]) val += mu * (Beta[0][ip] - 2.0 * Beta[0][q] + Beta[0][im]);
            } else {
                const std::size_t jm = (j + n - 1) % n, jp = (j + 1) % n;
                val -= lam * (G[q] - G[im * n + j]);
                val -= lam * (G[cells + q] - G[cells + i * n + jm]);
                if (B[0]) val += mu * (Beta[0][ip * n + j] - 2.0 * Beta[0][q] + Beta[0][im * n + j]);
                if (B[2]) val += mu * (Beta[2][i * n + jp] - 2.0 * Beta[2][q] + Beta[2][i * n + jm]);
                if (B[1])
                    val += mu * 0.5 *
                           (Beta[1][ip * n + jp] - Beta[1][ip * n + jm] - Beta[1][im * n + jp] + Beta[1][im * n + jm]);
            }
            m[q] = val;
        }
        floors[job] = 1e3 * std::numeric_limits<double>::epsilon() *
                      (max_eta / dt + max_G / dx + max_B / (dx * dx));
    });

    out.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < slabs.size(); ++s) {
        out.times.push_back(slabs[s]->t);
        out.dts.push_back(slabs[s]->successor_dt);
        for (std::size_t iv = 0; iv < nv; ++iv) {
            const double w = (iv == 0 || iv + 1 == nv) ? 0.5 * hv : hv;
            const double* m = out.slab(s, iv);
            double col = 0.0;
            for (std::size_t q = 0; q < cells; ++q) {
                out.min_value = std::min(out.min_value, m[q]);
                col += m[q];
            }
            out.total_mass += col * g.cell_volume() * w * slabs[s]->successor_dt;
            out.roundoff_floor = std::max(out.roundoff_floor, floors[s * nv + iv]);
        }
    }
    return out;
}

}  // namespace velavg::pde
