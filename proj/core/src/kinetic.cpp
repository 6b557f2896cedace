#include <cmath>

#include "flux.hpp"
#include "velavg/pde.hpp"

namespace velavg::pde {

double chi(double rho, double v) {
    if (v > 0.0 && v <= rho) return 1.0;
    if (v < 0.0 && v >= rho) return -1.0;
    return 0.0;
}

namespace detail {

KineticRelaxation::KineticRelaxation(const SymbolSpec& flux, const GridLayout& g, const KineticGrid& kg)
    : g_(g), kg_(kg), scratch_(g.size()) {
    for (int j = 0; j < g.dim; ++j) {
        std::vector<double> s(kg.m);
        for (std::size_t k = 0; k < kg.m; ++k) s[k] = flux.a(j)(kg.at(k));
        speed_.push_back(std::move(s));
    }
}

std::vector<double> KineticRelaxation::equilibrium(const std::vector<double>& rho) const {
    const std::size_t cells = g_.size();
    std::vector<double> f(cells * kg_.m);
    for (std::size_t k = 0; k < kg_.m; ++k) {
        const double v = kg_.at(k);
        for (std::size_t i = 0; i < cells; ++i) f[k * cells + i] = chi(rho[i], v);
    }
    return f;
}

void KineticRelaxation::step(std::vector<double>& f, std::vector<double>& rho, double dt, double eps) const {
    const std::size_t n = g_.n;
    const std::size_t cells = g_.size();
    const double lam = dt / g_.dx();
    const double dv = kg_.dv();
    for (std::size_t k = 0; k < kg_.m; ++k) {
        double* fk = f.data() + k * cells;
        auto& out = scratch_;
        for (std::size_t q = 0; q < cells; ++q) out[q] = fk[q];
        for (int axis = 0; axis < g_.dim; ++axis) {
            const double s = speed_[static_cast<std::size_t>(axis)][k];
            const double sp = std::max(s, 0.0), sm = std::min(s, 0.0);
            if (s == 0.0) continue;
            for (std::size_t q = 0; q < cells; ++q) {
                std::size_t i = g_.dim == 1 ? q : q / n;
                std::size_t j = g_.dim == 1 ? 0 : q % n;
                std::size_t qm, qp;
                if (axis == 0 && g_.dim == 1) {
                    qm = (i + n - 1) % n;
                    qp = (i + 1) % n;
                } else if (axis == 0) {
                    qm = ((i + n - 1) % n) * n + j;
                    qp = ((i + 1) % n) * n + j;
                } else {
                    qm = i * n + (j + n - 1) % n;
                    qp = i * n + (j + 1) % n;
                }
                out[q] -= lam * (sp * (fk[q] - fk[qm]) + sm * (fk[qp] - fk[q]));
            }
        }
        // density moves by the moment of the transport increment, so the
        // midpoint quantisation of chi never enters rho
        for (std::size_t q = 0; q < cells; ++q) {
            rho[q] += (out[q] - fk[q]) * dv;
            fk[q] = out[q];
        }
    }
    const double w = eps > 0.0 ? 1.0 - std::exp(-dt / eps) : 1.0;
    for (std::size_t k = 0; k < kg_.m; ++k) {
        const double v = kg_.at(k);
        double* fk = f.data() + k * cells;
        for (std::size_t q = 0; q < cells; ++q) fk[q] += w * (chi(rho[q], v) - fk[q]);
    }
}

}  // namespace detail
}  // namespace velavg::pde
