#pragma once
/// @file field.hpp
/// @brief Periodic grid fields in x and in (x, v), plus a plain-text field format.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace velavg {

bool is_power_of_two(std::size_t n);

/// Uniform periodic grid on [0, L)^d with n points per axis (d = 1 or 2).
struct GridLayout {
    int dim = 1;
    std::size_t n = 0;
    double L = 1.0;

    GridLayout() = default;
    GridLayout(int d, std::size_t n_, double L_);

    std::size_t size() const { return dim == 1 ? n : n * n; }
    double dx() const { return L / static_cast<double>(n); }
    double cell_volume() const { return dim == 1 ? dx() : dx() * dx(); }
    bool operator==(const GridLayout&) const = default;
};

/// Real values on a GridLayout, row-major (x1 slowest in 2D).
struct ScalarField {
    GridLayout layout;
    std::vector<double> values;
    std::string label;

    ScalarField() = default;
    ScalarField(GridLayout g, std::string label_ = {});
    ScalarField(GridLayout g, std::vector<double> vals, std::string label_ = {});

    std::size_t index(std::size_t i, std::size_t j) const { return i * layout.n + j; }
    double& operator()(std::size_t i) { return values[i]; }
    double operator()(std::size_t i) const { return values[i]; }
    double& operator()(std::size_t i, std::size_t j) { return values[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return values[index(i, j)]; }

    /// Integral over the box (rectangle rule).
    double integral() const;
    /// (sum |f|^p dx)^(1/p), or max |f| for p = infinity.
    double lp_norm(double p) const;
    double min() const;
    double max() const;
};

/// Uniform midpoint velocity grid of m points on [lo, hi].
struct VelocityGrid {
    double lo = -1.0;
    double hi = 1.0;
    std::size_t m = 0;

    double dv() const { return (hi - lo) / static_cast<double>(m); }
    double at(std::size_t k) const { return lo + (static_cast<double>(k) + 0.5) * dv(); }
};

/// f(x, v) sampled on a GridLayout times a VelocityGrid. Stored v-major:
/// values[k * layout.size() + i] is f(x_i, v_k). When time_axis is set the
/// layout is 2D and its first axis is periodic time rather than space.
struct XVField {
    GridLayout layout;
    VelocityGrid vgrid;
    std::vector<double> values;
    bool time_axis = false;

    XVField() = default;
    XVField(GridLayout g, VelocityGrid vg);

    double* slice(std::size_t k) { return values.data() + k * layout.size(); }
    const double* slice(std::size_t k) const { return values.data() + k * layout.size(); }
    /// (sum |f|^p dx dv)^(1/p).
    double lp_norm(double p) const;
};

/// Text format: '#'-prefixed header lines "d", "N", "L", "label", then one value
/// per line in row-major order.
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace velavg
