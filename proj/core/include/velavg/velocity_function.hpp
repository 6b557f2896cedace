#pragma once
/// @file velocity_function.hpp
/// @brief Scalar coefficient functions of the velocity variable v.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace velavg {

/// Closed velocity interval [lo, hi].
struct Interval {
    double lo = -1.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Value of a derivative together with a flag for points where the
/// function is not differentiable (the value is then a one-sided quotient).
struct Derivative {
    double value = 0.0;
    bool nondifferentiable = false;
};

/// A coefficient a(v) or b(v). Kinds:
///   power        v^l for a non-negative integer l
///   abs_power    |v|^l
///   signed_power sgn(v)|v|^l
///   sine         amp * sin(freq * v + phase)
///   constant     c
///   table        piecewise linear interpolation of strictly increasing samples
/// Any kind may carry a constant multiplier (written "c * kind ..." or "-kind ...").
class VelocityFunction {
public:
    enum class Kind { power, abs_power, signed_power, sine, constant, table };

    VelocityFunction() = default;  // the zero function

    static VelocityFunction power(double exponent);
    static VelocityFunction abs_power(double exponent);
    static VelocityFunction signed_power(double exponent);
    static VelocityFunction sine(double amplitude, double frequency, double phase);
    static VelocityFunction constant(double c);
    static VelocityFunction zero() { return {}; }
    static VelocityFunction table(std::vector<double> v, std::vector<double> y);
    /// The same function multiplied by c.
    VelocityFunction scaled(double c) const;

    /// Parses "power 2", "abs_power 1.5", "signed_power 0.5", "sin A f phi",
    /// "cos A f phi", "const c", "zero" or "table v0:y0 v1:y1 ...", optionally
    /// prefixed by "c *" or "-".
    static VelocityFunction parse(std::string_view text);
    /// Inverse of parse (round-trips exactly).
    std::string to_string() const;

    double operator()(double v) const;
    /// Derivative at v; tables use a centred difference with step h_v.
    Derivative derivative(double v, double h_v = 1e-4) const;
    /// Integral from 0 to v (from the nearest table end when 0 is outside a table).
    double antiderivative(double v) const;
    /// Integral of max(f, 0) from 0 to u (signed like an ordinary integral).
    double positive_part_integral(double u) const;
    /// Zeros strictly inside (lo, hi), sorted.
    std::vector<double> zeros_in(double lo, double hi) const;
    /// Points where the function is not differentiable (excluding table nodes).
    std::vector<double> kinks() const;

    Kind kind() const { return kind_; }
    bool is_zero() const { return scale_ == 0.0 || (kind_ == Kind::constant && c_ == 0.0); }
    bool is_power_kind() const {
        return kind_ == Kind::power || kind_ == Kind::abs_power || kind_ == Kind::signed_power;
    }
    double scale() const { return scale_; }
    /// True when both functions differ only by their multiplier.
    bool same_shape(const VelocityFunction& other) const;
    double exponent() const { return exponent_; }
    double amplitude() const { return amp_; }
    double frequency() const { return freq_; }
    double phase() const { return phase_; }
    double constant_value() const { return c_; }
    const std::vector<double>& table_v() const { return tv_; }
    const std::vector<double>& table_y() const { return ty_; }

    bool operator==(const VelocityFunction&) const = default;

private:
    static VelocityFunction parse_unscaled(std::string_view text);
    double base_value(double v) const;
    Derivative base_derivative(double v, double h_v) const;
    double base_antiderivative(double v) const;

    Kind kind_ = Kind::constant;
    double exponent_ = 0.0;
    double amp_ = 0.0;
    double freq_ = 0.0;
    double phase_ = 0.0;
    double c_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> tv_;
    std::vector<double> ty_;
};

}  // namespace velavg
