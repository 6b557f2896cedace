#include "velavg/symbol.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "velavg/error.hpp"

namespace velavg {
namespace {

constexpr double kPsdTolerance = 1e-12;
constexpr int kValidationSamples = 1025;

double min_eig_sym2(double a, double b, double c) {
    // eigenvalues of [[a, b], [b, c]]
    const double half_tr = 0.5 * (a + c);
    const double r = std::hypot(0.5 * (a - c), b);
    return half_tr - r;
}

}  // namespace

SymbolSpec::SymbolSpec(int dim, std::vector<VelocityFunction> convection, std::vector<VelocityFunction> diffusion,
                       Interval interval, bool includes_time, std::optional<Degrees> declared, double h_v)
    : dim_(dim),
      a_(std::move(convection)),
      b_(std::move(diffusion)),
      interval_(interval),
      includes_time_(includes_time),
      declared_(declared),
      h_v_(h_v) {
    if (dim_ != 1 && dim_ != 2) throw InputError(fmt::format("dimension must be 1 or 2, got {}", dim_));
    if (a_.size() != static_cast<std::size_t>(dim_))
        throw InputError(fmt::format("convection needs {} components, got {}", dim_, a_.size()));
    if (b_.size() != static_cast<std::size_t>(dim_ * dim_))
        throw InputError(fmt::format("diffusion needs {} entries, got {}", dim_ * dim_, b_.size()));
    if (!std::isfinite(interval_.lo) || !std::isfinite(interval_.hi) || !(interval_.hi > interval_.lo))
        throw InputError("velocity interval must be finite with lo < hi");
    if (!(h_v_ > 0.0)) throw InputError("h_v must be positive");

    const auto n = kValidationSamples;
    for (int i = 0; i < n; ++i) {
        const double v = interval_.lo + interval_.length() * i / (n - 1);
        for (const auto& f : a_) (void)f(v);  // domain check for tables
        if (dim_ == 1) {
            if (b_[0](v) < -kPsdTolerance)
                throw InputError(fmt::format("diffusion b(v) is negative at v = {}", v));
        } else {
            const double b11 = b_[0](v), b12 = b_[1](v), b21 = b_[2](v), b22 = b_[3](v);
            if (std::fabs(b12 - b21) > kPsdTolerance * std::max(1.0, std::fabs(b12)))
                throw InputError(fmt::format("diffusion matrix is not symmetric at v = {}", v));
            if (min_eig_sym2(b11, b12, b22) < -kPsdTolerance)
                throw InputError(fmt::format("diffusion matrix is not positive semi-definite at v = {}", v));
        }
    }
}

SymbolSpec SymbolSpec::conservation_law(std::vector<VelocityFunction> a, Interval I, bool includes_time) {
    const int d = static_cast<int>(a.size());
    std::vector<VelocityFunction> b(static_cast<std::size_t>(d * d));
    return SymbolSpec(d, std::move(a), std::move(b), I, includes_time);
}

SymbolSpec SymbolSpec::diffusion_only(int dim, std::vector<VelocityFunction> b, Interval I, bool includes_time) {
    std::vector<VelocityFunction> a(static_cast<std::size_t>(std::max(dim, 0)));
    return SymbolSpec(dim, std::move(a), std::move(b), I, includes_time);
}

bool SymbolSpec::has_convection() const {
    return std::any_of(a_.begin(), a_.end(), [](const auto& f) { return !f.is_zero(); });
}

bool SymbolSpec::has_diffusion() const {
    return std::any_of(b_.begin(), b_.end(), [](const auto& f) { return !f.is_zero(); });
}

std::vector<double> SymbolSpec::kinks() const {
    std::vector<double> k;
    for (const auto& f : a_)
        for (double z : f.kinks()) k.push_back(z);
    for (const auto& f : b_)
        for (double z : f.kinks()) k.push_back(z);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

double FrequencyPoint::magnitude(int dim, bool with_time) const {
    double s = with_time ? tau * tau : 0.0;
    for (int j = 0; j < dim; ++j) s += xi[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
    return std::sqrt(s);
}

namespace {

void check_point(const SymbolSpec& spec, const FrequencyPoint& fp, double v) {
    if (!std::isfinite(v) || !std::isfinite(fp.tau) || !std::isfinite(fp.xi[0]) || !std::isfinite(fp.xi[1]))
        throw InputError("symbol arguments must be finite");
    if (!spec.interval().contains(v))
        throw DomainError(fmt::format("v = {} outside velocity interval [{}, {}]", v, spec.interval().lo,
                                      spec.interval().hi));
}

}  // namespace

std::complex<double> eval_symbol(const SymbolSpec& spec, const FrequencyPoint& fp, double v) {
    check_point(spec, fp, v);
    const int d = spec.dim();
    double im = spec.includes_time() ? fp.tau : 0.0;
    double re = 0.0;
    for (int j = 0; j < d; ++j) {
        const double xj = fp.xi[static_cast<std::size_t>(j)];
        im += spec.a(j)(v) * xj;
        for (int k = 0; k < d; ++k) re += spec.b(j, k)(v) * xj * fp.xi[static_cast<std::size_t>(k)];
    }
    return {re, im};
}

SymbolDerivative eval_symbol_v(const SymbolSpec& spec, const FrequencyPoint& fp, double v) {
    check_point(spec, fp, v);
    const int d = spec.dim();
    const double h = spec.h_v();
    SymbolDerivative out{{0.0, 0.0}, false};
    double re = 0.0, im = 0.0;
    for (int j = 0; j < d; ++j) {
        const double xj = fp.xi[static_cast<std::size_t>(j)];
        if (xj != 0.0) {
            const auto da = spec.a(j).derivative(v, h);
            im += da.value * xj;
            out.nondifferentiable |= da.nondifferentiable;
        }
        for (int k = 0; k < d; ++k) {
            const double w = xj * fp.xi[static_cast<std::size_t>(k)];
            if (w == 0.0) continue;
            const auto db = spec.b(j, k).derivative(v, h);
            re += db.value * w;
            out.nondifferentiable |= db.nondifferentiable;
        }
    }
    out.value = {re, im};
    return out;
}

double smallest_eigenvalue(const SymbolSpec& spec, double v) {
    if (!spec.interval().contains(v)) throw DomainError(fmt::format("v = {} outside velocity interval", v));
    if (spec.dim() == 1) return spec.b(0, 0)(v);
    return min_eig_sym2(spec.b(0, 0)(v), spec.b(0, 1)(v), spec.b(1, 1)(v));
}

}  // namespace velavg
