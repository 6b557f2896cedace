#pragma once
/// @file symbol.hpp
/// @brief Kinetic symbol L(i(tau, xi), v) = i(tau + a(v).xi) + <b(v) xi, xi>.

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "velavg/velocity_function.hpp"

namespace velavg {

/// Convection vector a(v), diffusion matrix b(v), dimension and velocity interval.
class SymbolSpec {
public:
    struct Degrees {
        double convection = 1.0;  ///< homogeneity degree of the convective part
        double diffusion = 2.0;   ///< homogeneity degree of the diffusive part
    };

    SymbolSpec() = default;

    /// Validates dimension, sizes, symmetry and positive semi-definiteness of b
    /// (sampled on the interval with tolerance 1e-12). `diffusion` is row-major d x d.
    SymbolSpec(int dim, std::vector<VelocityFunction> convection, std::vector<VelocityFunction> diffusion,
               Interval interval, bool includes_time, std::optional<Degrees> declared = std::nullopt,
               double h_v = 1e-4);

    /// Pure convection a(v) with zero diffusion.
    static SymbolSpec conservation_law(std::vector<VelocityFunction> a, Interval I, bool includes_time = true);
    /// Pure diffusion b(v) (row-major) with zero convection.
    static SymbolSpec diffusion_only(int dim, std::vector<VelocityFunction> b, Interval I, bool includes_time);

    int dim() const { return dim_; }
    const std::vector<VelocityFunction>& convection() const { return a_; }
    const std::vector<VelocityFunction>& diffusion() const { return b_; }
    const VelocityFunction& a(int j) const { return a_[static_cast<std::size_t>(j)]; }
    const VelocityFunction& b(int j, int k) const { return b_[static_cast<std::size_t>(j * dim_ + k)]; }
    const Interval& interval() const { return interval_; }
    bool includes_time() const { return includes_time_; }
    const std::optional<Degrees>& declared_degrees() const { return declared_; }
    double h_v() const { return h_v_; }

    bool has_convection() const;
    bool has_diffusion() const;
    /// Union of the non-differentiability points of all coefficients.
    std::vector<double> kinks() const;

private:
    int dim_ = 1;
    std::vector<VelocityFunction> a_{VelocityFunction::zero()};
    std::vector<VelocityFunction> b_{VelocityFunction::zero()};
    Interval interval_{};
    bool includes_time_ = true;
    std::optional<Degrees> declared_;
    double h_v_ = 1e-4;
};

/// Point (tau, xi) in frequency space; J = |(tau, xi)|.
struct FrequencyPoint {
    double tau = 0.0;
    std::array<double, 2> xi{0.0, 0.0};

    FrequencyPoint() = default;
    FrequencyPoint(double tau_, std::array<double, 2> xi_) : tau(tau_), xi(xi_) {}
    /// Euclidean norm over the active components (tau only if the symbol has time).
    double magnitude(int dim, bool with_time) const;
};

/// Symbol value at (tau, xi, v). Throws DomainError if v is outside the interval.
std::complex<double> eval_symbol(const SymbolSpec& spec, const FrequencyPoint& fp, double v);

/// v-derivative of the symbol, with a flag at non-differentiable points.
struct SymbolDerivative {
    std::complex<double> value;
    bool nondifferentiable = false;
};
SymbolDerivative eval_symbol_v(const SymbolSpec& spec, const FrequencyPoint& fp, double v);

/// Smallest eigenvalue of b(v).
double smallest_eigenvalue(const SymbolSpec& spec, double v);

}  // namespace velavg
