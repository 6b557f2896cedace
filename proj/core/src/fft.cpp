#include "velavg/fft.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace velavg::fft {
namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct RealFft::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

RealFft::RealFft(const GridLayout& layout) : layout_(layout), impl_(std::make_unique<Impl>()) {
    const int n = static_cast<int>(layout.n);
    half_ = layout.n / 2 + 1;
    spec_size_ = layout.dim == 1 ? half_ : layout.n * half_;
    impl_->real = fftw_alloc_real(layout.size());
    impl_->spec = fftw_alloc_complex(spec_size_);
    std::lock_guard lock(planner_mutex());
    if (layout.dim == 1) {
        impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real, impl_->spec, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_1d(n, impl_->spec, impl_->real, FFTW_ESTIMATE);
    } else {
        impl_->fwd = fftw_plan_dft_r2c_2d(n, n, impl_->real, impl_->spec, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_2d(n, n, impl_->spec, impl_->real, FFTW_ESTIMATE);
    }
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
}

std::array<long, 2> RealFft::wavenumber(std::size_t idx) const {
    const long n = static_cast<long>(layout_.n);
    if (layout_.dim == 1) return {static_cast<long>(idx), 0};
    const long i0 = static_cast<long>(idx / half_);
    const long i1 = static_cast<long>(idx % half_);
    return {i0 <= n / 2 ? i0 : i0 - n, i1};
}

double RealFft::radius(std::size_t idx) const {
    const auto k = wavenumber(idx);
    return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

void RealFft::forward(const double* in, std::complex<double>* out) {
    std::memcpy(impl_->real, in, layout_.size() * sizeof(double));
    fftw_execute(impl_->fwd);
    std::memcpy(static_cast<void*>(out), impl_->spec, spec_size_ * sizeof(fftw_complex));
}

void RealFft::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(impl_->spec, static_cast<const void*>(in), spec_size_ * sizeof(fftw_complex));
    fftw_execute(impl_->inv);
    const double scale = 1.0 / static_cast<double>(layout_.size());
    for (std::size_t i = 0; i < layout_.size(); ++i) out[i] = impl_->real[i] * scale;
}

}  // namespace velavg::fft
