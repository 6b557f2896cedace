#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "velavg/elliptic.hpp"
#include "velavg/error.hpp"

namespace velavg::pde {

ScalarField EllipticSolution::to_field(const std::string& label) const {
    ScalarField f(GridLayout(dim, n, L), label);
    if (dim == 1) {
        for (std::size_t i = 0; i < n; ++i) f.values[i] = nodes[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) f.values[i * n + j] = nodes[i * (n + 1) + j];
    }
    return f;
}

namespace {

struct Discretisation {
    int d;
    std::size_t n;   // cells per axis
    std::size_t np;  // nodes per axis
    double h;
    std::vector<long> unknown;  // node -> unknown index or -1 on the boundary
    std::vector<std::size_t> interior;

    std::size_t node(std::size_t i, std::size_t j) const { return d == 1 ? i : i * np + j; }
};

struct Term {
    int j, k;
    const VelocityFunction* b;
};

/// Residual R(rho) = sum d_j d_k B_jk(rho) + S(rho) at interior nodes.
void residual(const Discretisation& D, const std::vector<Term>& terms, const VelocityFunction& S,
              const std::vector<double>& rho, std::vector<std::vector<double>>& Bvals, Eigen::VectorXd& R) {
    for (std::size_t t = 0; t < terms.size(); ++t)
        for (std::size_t q = 0; q < rho.size(); ++q) Bvals[t][q] = terms[t].b->antiderivative(rho[q]);
    const double ih2 = 1.0 / (D.h * D.h);
    for (std::size_t u = 0; u < D.interior.size(); ++u) {
        const std::size_t p = D.interior[u];
        const std::size_t i = D.d == 1 ? p : p / D.np, j = D.d == 1 ? 0 : p % D.np;
        double r = S(rho[p]);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& B = Bvals[t];
            const double coef = terms[t].j == terms[t].k ? 1.0 : 2.0;
            if (D.d == 1) {
                r += ih2 * (B[p + 1] - 2.0 * B[p] + B[p - 1]);
            } else if (terms[t].j == 0 && terms[t].k == 0) {
                r += ih2 * (B[D.node(i + 1, j)] - 2.0 * B[p] + B[D.node(i - 1, j)]);
            } else if (terms[t].j == 1 && terms[t].k == 1) {
                r += ih2 * (B[D.node(i, j + 1)] - 2.0 * B[p] + B[D.node(i, j - 1)]);
            } else {
                r += coef * 0.25 * ih2 *
                     (B[D.node(i + 1, j + 1)] - B[D.node(i + 1, j - 1)] - B[D.node(i - 1, j + 1)] +
                      B[D.node(i - 1, j - 1)]);
            }
        }
        R[static_cast<long>(u)] = r;
    }
}

double l2(const Eigen::VectorXd& R, double weight) { return std::sqrt(R.squaredNorm() * weight); }

/// Node values of a coarse solution (n/2 cells per axis) interpolated onto n cells.
std::vector<double> prolong(const EllipticSolution& coarse, std::size_t n, int d) {
    const std::size_t np = n + 1, cp = coarse.n + 1;
    auto c = [&](std::size_t i, std::size_t j) { return coarse.nodes[d == 1 ? i : i * cp + j]; };
    auto along = [&](std::size_t i, std::size_t j) {  // fine i, coarse j
        return i % 2 == 0 ? c(i / 2, j) : 0.5 * (c(i / 2, j) + c(i / 2 + 1, j));
    };
    std::vector<double> out(d == 1 ? np : np * np);
    if (d == 1) {
        for (std::size_t i = 0; i < np; ++i) out[i] = along(i, 0);
        return out;
    }
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j)
            out[i * np + j] = j % 2 == 0 ? along(i, j / 2) : 0.5 * (along(i, j / 2) + along(i, j / 2 + 1));
    return out;
}

EllipticSolution solve_ptc(const EllipticProblem& pb, const EllipticOptions& opt, const std::vector<double>* start);

}  // namespace

EllipticSolution solve_elliptic_degenerate(const EllipticProblem& pb, const EllipticOptions& opt) {
    if (pb.dim != 1 && pb.dim != 2) throw InputError("elliptic problems are 1D or 2D");
    if (pb.spec.dim() != pb.dim) throw InputError("symbol and problem dimensions differ");
    if (pb.spec.has_convection()) throw InputError("elliptic problems take a diffusion-only symbol");
    if (pb.n < 2) throw InputError("need at least two cells per axis");
    if (!(pb.L > 0.0)) throw InputError("box length must be positive");
    if (!(opt.tolerance > 0.0)) throw InputError("tolerance must be positive");
    if (opt.coarsest > 0 && pb.n % 2 == 0 && pb.n / 2 >= opt.coarsest) {
        EllipticProblem coarse = pb;
        coarse.n = pb.n / 2;
        const auto start = prolong(solve_elliptic_degenerate(coarse, opt), pb.n, pb.dim);
        return solve_ptc(pb, opt, &start);
    }
    return solve_ptc(pb, opt, nullptr);
}

namespace {

EllipticSolution solve_ptc(const EllipticProblem& pb, const EllipticOptions& opt, const std::vector<double>* start) {
    Discretisation D{pb.dim, pb.n, pb.n + 1, pb.L / static_cast<double>(pb.n), {}, {}};
    const std::size_t total = pb.dim == 1 ? D.np : D.np * D.np;
    D.unknown.assign(total, -1);
    std::vector<double> rho(total, 0.0);
    for (std::size_t p = 0; p < total; ++p) {
        const std::size_t i = D.d == 1 ? p : p / D.np, j = D.d == 1 ? 0 : p % D.np;
        const bool edge = i == 0 || i == pb.n || (D.d == 2 && (j == 0 || j == pb.n));
        if (edge) {
            rho[p] = pb.boundary(static_cast<double>(i) * D.h, D.d == 2 ? static_cast<double>(j) * D.h : 0.0);
        } else {
            if (start) rho[p] = (*start)[p];
            D.unknown[p] = static_cast<long>(D.interior.size());
            D.interior.push_back(p);
        }
    }

    std::vector<Term> terms;
    for (int j = 0; j < pb.dim; ++j)
        for (int k = j; k < pb.dim; ++k)
            if (!pb.spec.b(j, k).is_zero()) terms.push_back({j, k, &pb.spec.b(j, k)});

    const long nu = static_cast<long>(D.interior.size());
    const double weight = std::pow(D.h, pb.dim);
    std::vector<std::vector<double>> Bvals(terms.size(), std::vector<double>(total));
    Eigen::VectorXd R(nu), Rtrial(nu);
    residual(D, terms, pb.source, rho, Bvals, R);
    double r = l2(R, weight);

    EllipticSolution sol;
    sol.dim = pb.dim;
    sol.n = pb.n;
    sol.L = pb.L;
    sol.residual_history.push_back(r);

    Eigen::SparseMatrix<double> A(nu, nu);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analysed = false;
    std::vector<Eigen::Triplet<double>> trip;
    double dtau = opt.initial_dtau > 0.0 ? opt.initial_dtau : D.h * D.h;
    const double ih2 = 1.0 / (D.h * D.h);
    const double hs = 1e-7;

    std::size_t it = 0;
    while (r >= opt.tolerance) {
        if (it >= opt.max_iterations)
            throw ConvergenceError(fmt::format("no steady state after {} iterations (residual {:.3e})", it, r),
                                   sol.residual_history);
        ++it;
        // A = I/dtau - dR/drho; every stencil entry is written (also zeros) so the pattern never changes
        trip.clear();
        for (long u = 0; u < nu; ++u) {
            const std::size_t p = D.interior[static_cast<std::size_t>(u)];
            const double ds = pb.source.derivative(rho[p], hs).value;
            trip.emplace_back(u, u, 1.0 / dtau - ds);
        }
        auto add = [&](std::size_t row_node, std::size_t col_node, double value) {
            const long c = D.unknown[col_node];
            if (c >= 0) trip.emplace_back(D.unknown[row_node], c, -value);
        };
        for (const auto& t : terms) {
            const double coef = t.j == t.k ? 1.0 : 2.0;
            for (std::size_t p : D.interior) {
                const std::size_t i = D.d == 1 ? p : p / D.np, j = D.d == 1 ? 0 : p % D.np;
                auto bq = [&](std::size_t q) { return (*t.b)(rho[q]); };
                if (D.d == 1) {
                    add(p, p + 1, ih2 * bq(p + 1));
                    add(p, p, -2.0 * ih2 * bq(p));
                    add(p, p - 1, ih2 * bq(p - 1));
                } else if (t.j == 0 && t.k == 0) {
                    add(p, D.node(i + 1, j), ih2 * bq(D.node(i + 1, j)));
                    add(p, p, -2.0 * ih2 * bq(p));
                    add(p, D.node(i - 1, j), ih2 * bq(D.node(i - 1, j)));
                } else if (t.j == 1 && t.k == 1) {
                    add(p, D.node(i, j + 1), ih2 * bq(D.node(i, j + 1)));
                    add(p, p, -2.0 * ih2 * bq(p));
                    add(p, D.node(i, j - 1), ih2 * bq(D.node(i, j - 1)));
                } else {
                    const double c = coef * 0.25 * ih2;
                    add(p, D.node(i + 1, j + 1), c * bq(D.node(i + 1, j + 1)));
                    add(p, D.node(i + 1, j - 1), -c * bq(D.node(i + 1, j - 1)));
                    add(p, D.node(i - 1, j + 1), -c * bq(D.node(i - 1, j + 1)));
                    add(p, D.node(i - 1, j - 1), c * bq(D.node(i - 1, j - 1)));
                }
            }
        }
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
        if (!analysed) {
            lu.analyzePattern(A);
            analysed = true;
        }
        lu.factorize(A);
        bool ok = lu.info() == Eigen::Success;
        std::vector<double> trial = rho;
        double rt = std::numeric_limits<double>::infinity();
        if (ok) {
            const Eigen::VectorXd delta = lu.solve(R);
            for (long u = 0; u < nu; ++u) trial[D.interior[static_cast<std::size_t>(u)]] += delta[u];
            residual(D, terms, pb.source, trial, Bvals, Rtrial);
            rt = l2(Rtrial, weight);
            ok = std::isfinite(rt);
        }
        if (!ok || rt > 2.0 * r) {
            dtau *= 0.25;
            sol.residual_history.push_back(r);
            continue;
        }
        // switched evolution relaxation, with at least doubling while the residual falls
        if (rt <= r) dtau = std::min(dtau * std::clamp(rt > 0.0 ? r / rt : opt.max_growth, 2.0, opt.max_growth), opt.max_dtau);
        rho.swap(trial);
        R.swap(Rtrial);
        r = rt;
        sol.residual_history.push_back(r);
    }
    sol.iterations = it;
    sol.nodes = std::move(rho);
    return sol;
}

}  // namespace

}  // namespace velavg::pde
