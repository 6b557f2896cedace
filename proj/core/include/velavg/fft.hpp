#pragma once
/// @file fft.hpp
/// @brief Real-to-complex transforms on a GridLayout (FFTW backend).

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "velavg/field.hpp"

namespace velavg::fft {

/// Forward/inverse real transform for one layout. Not thread-safe per object;
/// separate objects may be used concurrently.
class RealFft {
public:
    explicit RealFft(const GridLayout& layout);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    const GridLayout& layout() const { return layout_; }
    /// Number of complex coefficients in the half spectrum.
    std::size_t spectrum_size() const { return spec_size_; }
    /// Integer wavenumbers (cycles per box) of half-spectrum entry idx.
    std::array<long, 2> wavenumber(std::size_t idx) const;
    /// Euclidean norm of wavenumber(idx).
    double radius(std::size_t idx) const;

    void forward(const double* in, std::complex<double>* out);
    /// Normalised inverse (inverse(forward(f)) == f).
    void inverse(const std::complex<double>* in, double* out);

private:
    struct Impl;
    GridLayout layout_;
    std::size_t spec_size_ = 0;
    std::size_t half_ = 0;
    std::unique_ptr<Impl> impl_;
};

}  // namespace velavg::fft
