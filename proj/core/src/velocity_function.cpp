#include "velavg/velocity_function.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "velavg/error.hpp"

namespace velavg {
namespace {

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

double int_pow(double x, int n) {
    double r = 1.0;
    double b = x;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

/// |x|^p with a fast path for small integer exponents.
double abs_pow(double x, double p) {
    const double a = std::fabs(x);
    if (is_integer(p) && p >= 0.0 && p <= 16.0) return int_pow(a, static_cast<int>(p));
    if (a == 0.0) return p == 0.0 ? 1.0 : 0.0;
    return std::pow(a, p);
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_finite(double v) {
    if (!std::isfinite(v)) throw InputError("velocity must be finite");
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

VelocityFunction VelocityFunction::power(double exponent) {
    if (!is_integer(exponent) || exponent < 0.0)
        throw InputError(fmt::format("power kind needs a non-negative integer exponent, got {}", exponent));
    VelocityFunction f;
    f.kind_ = Kind::power;
    f.exponent_ = exponent;
    return f;
}

VelocityFunction VelocityFunction::abs_power(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw InputError("abs_power exponent must be positive");
    VelocityFunction f;
    f.kind_ = Kind::abs_power;
    f.exponent_ = exponent;
    return f;
}

VelocityFunction VelocityFunction::signed_power(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw InputError("signed_power exponent must be positive");
    VelocityFunction f;
    f.kind_ = Kind::signed_power;
    f.exponent_ = exponent;
    return f;
}

VelocityFunction VelocityFunction::sine(double amplitude, double frequency, double phase) {
    if (!std::isfinite(amplitude) || !std::isfinite(frequency) || !std::isfinite(phase))
        throw InputError("sine parameters must be finite");
    VelocityFunction f;
    f.kind_ = Kind::sine;
    f.amp_ = amplitude;
    f.freq_ = frequency;
    f.phase_ = phase;
    return f;
}

VelocityFunction VelocityFunction::constant(double c) {
    if (!std::isfinite(c)) throw InputError("constant must be finite");
    VelocityFunction f;
    f.c_ = c;
    return f;
}

VelocityFunction VelocityFunction::table(std::vector<double> v, std::vector<double> y) {
    if (v.size() < 2 || v.size() != y.size())
        throw InputError("table needs at least two (v, y) samples of equal length");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || !std::isfinite(y[i])) throw InputError("table samples must be finite");
        if (i > 0 && !(v[i] > v[i - 1])) throw InputError("table velocities must be strictly increasing");
    }
    VelocityFunction f;
    f.kind_ = Kind::table;
    f.tv_ = std::move(v);
    f.ty_ = std::move(y);
    return f;
}

VelocityFunction VelocityFunction::scaled(double c) const {
    if (!std::isfinite(c)) throw InputError("scale must be finite");
    VelocityFunction f = *this;
    f.scale_ *= c;
    return f;
}

bool VelocityFunction::same_shape(const VelocityFunction& other) const {
    VelocityFunction a = *this, b = other;
    a.scale_ = b.scale_ = 1.0;
    return a == b;
}

VelocityFunction VelocityFunction::parse(std::string_view text) {
    std::string_view body = text;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
    if (const auto star = body.find('*'); star != std::string_view::npos) {
        double c = 0.0;
        try {
            std::size_t used = 0;
            const std::string head(body.substr(0, star));
            c = std::stod(head, &used);
            if (head.find_first_not_of(" \t", used) != std::string::npos) throw InputError("");
        } catch (const std::exception&) {
            throw InputError(fmt::format("velocity function '{}': bad multiplier", text));
        }
        return parse(body.substr(star + 1)).scaled(c);
    }
    if (!body.empty() && body.front() == '-') return parse(body.substr(1)).scaled(-1.0);
    return parse_unscaled(body);
}

VelocityFunction VelocityFunction::parse_unscaled(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string name;
    in >> name;
    auto number = [&](const char* what) {
        double x;
        if (!(in >> x)) throw InputError(fmt::format("velocity function '{}': missing {}", text, what));
        return x;
    };
    auto finish = [&] {
        std::string rest;
        if (in >> rest) throw InputError(fmt::format("velocity function '{}': trailing '{}'", text, rest));
    };
    VelocityFunction f;
    if (name == "power") {
        f = power(number("exponent"));
    } else if (name == "abs_power") {
        f = abs_power(number("exponent"));
    } else if (name == "signed_power") {
        f = signed_power(number("exponent"));
    } else if (name == "sin" || name == "cos") {
        const double a = number("amplitude");
        const double w = number("frequency");
        double phi = 0.0;
        if (!(in >> phi)) {
            phi = 0.0;
            in.clear();
        }
        if (name == "cos") phi += std::numbers::pi / 2.0;
        f = sine(a, w, phi);
    } else if (name == "const") {
        f = constant(number("value"));
    } else if (name == "zero") {
        f = zero();
    } else if (name == "table") {
        std::vector<double> v, y;
        std::string tok;
        while (in >> tok) {
            std::replace(tok.begin(), tok.end(), ',', ' ');
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                if (tok.find_first_not_of(' ') == std::string::npos) continue;
                throw InputError(fmt::format("table entry '{}' is not v:y", tok));
            }
            try {
                v.push_back(std::stod(tok.substr(0, colon)));
                y.push_back(std::stod(tok.substr(colon + 1)));
            } catch (const std::exception&) {
                throw InputError(fmt::format("table entry '{}' is not numeric", tok));
            }
        }
        return table(std::move(v), std::move(y));
    } else {
        throw InputError(fmt::format("unknown velocity function kind '{}'", name));
    }
    finish();
    return f;
}

std::string VelocityFunction::to_string() const {
    if (scale_ != 1.0) {
        VelocityFunction base = *this;
        base.scale_ = 1.0;
        return fmt_double(scale_) + " * " + base.to_string();
    }
    switch (kind_) {
        case Kind::power: return "power " + fmt_double(exponent_);
        case Kind::abs_power: return "abs_power " + fmt_double(exponent_);
        case Kind::signed_power: return "signed_power " + fmt_double(exponent_);
        case Kind::sine:
            return fmt::format("sin {} {} {}", fmt_double(amp_), fmt_double(freq_), fmt_double(phase_));
        case Kind::constant: return c_ == 0.0 ? std::string("zero") : "const " + fmt_double(c_);
        case Kind::table: {
            std::string s = "table";
            for (std::size_t i = 0; i < tv_.size(); ++i) s += " " + fmt_double(tv_[i]) + ":" + fmt_double(ty_[i]);
            return s;
        }
    }
    return {};
}

double VelocityFunction::operator()(double v) const {
    require_finite(v);
    return scale_ * base_value(v);
}

double VelocityFunction::base_value(double v) const {
    switch (kind_) {
        case Kind::power: {
            const int n = static_cast<int>(exponent_);
            return int_pow(v, n);
        }
        case Kind::abs_power: return abs_pow(v, exponent_);
        case Kind::signed_power: return sgn(v) * abs_pow(v, exponent_);
        case Kind::sine: return amp_ * std::sin(freq_ * v + phase_);
        case Kind::constant: return c_;
        case Kind::table: {
            if (v < tv_.front() || v > tv_.back())
                throw DomainError(fmt::format("v = {} outside table range [{}, {}]", v, tv_.front(), tv_.back()));
            auto it = std::upper_bound(tv_.begin(), tv_.end(), v);
            std::size_t i = (it == tv_.end()) ? tv_.size() - 2 : static_cast<std::size_t>(it - tv_.begin()) - 1;
            const double t = (v - tv_[i]) / (tv_[i + 1] - tv_[i]);
            return ty_[i] + t * (ty_[i + 1] - ty_[i]);
        }
    }
    return 0.0;
}

Derivative VelocityFunction::derivative(double v, double h_v) const {
    require_finite(v);
    if (!(h_v > 0.0)) throw InputError("finite difference step must be positive");
    Derivative d = base_derivative(v, h_v);
    d.value *= scale_;
    return d;
}

Derivative VelocityFunction::base_derivative(double v, double h_v) const {
    const double l = exponent_;
    switch (kind_) {
        case Kind::power:
            if (l == 0.0) return {0.0, false};
            return {l * int_pow(v, static_cast<int>(l) - 1), false};
        case Kind::abs_power:
            if (v != 0.0) return {l * abs_pow(v, l - 1.0) * sgn(v), false};
            if (l > 1.0) return {0.0, false};
            return {(base_value(h_v) - base_value(0.0)) / h_v, true};
        case Kind::signed_power:
            if (v != 0.0) return {l * abs_pow(v, l - 1.0), false};
            if (l > 1.0) return {0.0, false};
            if (l == 1.0) return {1.0, false};
            return {(base_value(h_v) - base_value(0.0)) / h_v, true};
        case Kind::sine: return {amp_ * freq_ * std::cos(freq_ * v + phase_), false};
        case Kind::constant: return {0.0, false};
        case Kind::table: {
            if (v < tv_.front() || v > tv_.back())
                throw DomainError(fmt::format("v = {} outside table range", v));
            const double lo = std::max(tv_.front(), v - h_v);
            const double hi = std::min(tv_.back(), v + h_v);
            return {(base_value(hi) - base_value(lo)) / (hi - lo), false};
        }
    }
    return {};
}

double VelocityFunction::antiderivative(double v) const {
    require_finite(v);
    return scale_ * base_antiderivative(v);
}

double VelocityFunction::base_antiderivative(double v) const {
    const double l = exponent_;
    switch (kind_) {
        case Kind::power: return int_pow(v, static_cast<int>(l) + 1) / (l + 1.0);
        case Kind::abs_power: return sgn(v) * abs_pow(v, l + 1.0) / (l + 1.0);
        case Kind::signed_power: return abs_pow(v, l + 1.0) / (l + 1.0);
        case Kind::sine:
            if (freq_ == 0.0) return amp_ * std::sin(phase_) * v;
            return amp_ / freq_ * (std::cos(phase_) - std::cos(freq_ * v + phase_));
        case Kind::constant: return c_ * v;
        case Kind::table: {
            if (v < tv_.front() || v > tv_.back())
                throw DomainError(fmt::format("v = {} outside table range", v));
            const double ref = std::clamp(0.0, tv_.front(), tv_.back());
            // exact integral of the interpolant between two points
            auto integral_to = [&](double x) {
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < tv_.size(); ++i) {
                    const double a = tv_[i];
                    const double b = std::min(tv_[i + 1], x);
                    if (b <= a) break;
                    s += 0.5 * (b - a) * (base_value(a) + base_value(b));
                }
                return s;
            };
            return integral_to(v) - integral_to(ref);
        }
    }
    return 0.0;
}

double VelocityFunction::positive_part_integral(double u) const {
    require_finite(u);
    const double lo = std::min(0.0, u);
    const double hi = std::max(0.0, u);
    if (lo == hi) return 0.0;
    std::vector<double> pts{lo};
    for (double z : zeros_in(lo, hi)) pts.push_back(z);
    if (kind_ == Kind::table) {
        for (double t : tv_)
            if (t > lo && t < hi) pts.push_back(t);
        std::sort(pts.begin(), pts.end());
    }
    pts.push_back(hi);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double a = pts[k];
        const double b = pts[k + 1];
        if (b <= a) continue;
        if ((*this)(0.5 * (a + b)) > 0.0) s += antiderivative(b) - antiderivative(a);
    }
    return u >= 0.0 ? s : -s;
}

std::vector<double> VelocityFunction::zeros_in(double lo, double hi) const {
    std::vector<double> z;
    if (!(hi > lo) || scale_ == 0.0) return z;
    switch (kind_) {
        case Kind::power:
            if (exponent_ >= 1.0 && lo < 0.0 && hi > 0.0) z.push_back(0.0);
            break;
        case Kind::abs_power:
        case Kind::signed_power:
            if (lo < 0.0 && hi > 0.0) z.push_back(0.0);
            break;
        case Kind::sine: {
            if (amp_ == 0.0 || freq_ == 0.0) break;
            const double pi = std::numbers::pi;
            // freq*v + phase = k*pi
            double k0 = (std::min(freq_ * lo, freq_ * hi) + phase_) / pi;
            double k1 = (std::max(freq_ * lo, freq_ * hi) + phase_) / pi;
            for (double k = std::floor(k0); k <= std::ceil(k1); k += 1.0) {
                const double v = (k * pi - phase_) / freq_;
                if (v > lo && v < hi) z.push_back(v);
            }
            break;
        }
        case Kind::constant: break;
        case Kind::table:
            for (std::size_t i = 0; i + 1 < tv_.size(); ++i) {
                const double ya = ty_[i], yb = ty_[i + 1];
                if (ya == 0.0 && tv_[i] > lo && tv_[i] < hi) z.push_back(tv_[i]);
                if ((ya < 0.0 && yb > 0.0) || (ya > 0.0 && yb < 0.0)) {
                    const double v = tv_[i] + (tv_[i + 1] - tv_[i]) * ya / (ya - yb);
                    if (v > lo && v < hi) z.push_back(v);
                }
            }
            if (ty_.back() == 0.0 && tv_.back() > lo && tv_.back() < hi) z.push_back(tv_.back());
            break;
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

std::vector<double> VelocityFunction::kinks() const {
    if (scale_ == 0.0) return {};
    if (kind_ == Kind::abs_power && exponent_ <= 1.0) return {0.0};
    if (kind_ == Kind::signed_power && exponent_ < 1.0) return {0.0};
    return {};
}

}  // namespace velavg
