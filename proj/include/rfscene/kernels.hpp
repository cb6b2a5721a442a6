#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the synthesis and STFT pipelines.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant selected at runtime. The two are equivalence-tested;
// force_scalar() (or RFSCENE_SIMD=scalar) pins the reference path.
namespace rfscene::kernels {

using cd = std::complex<double>;

// dst[i] = src[i] * w[i]
void multiply_real(cd* dst, const cd* src, const double* w, std::size_t n);

// dst[i] += src[i]
void accumulate(cd* dst, const cd* src, std::size_t n);

// dst[i] += alpha * taps[i]
void axpy_real(cd* dst, cd alpha, const double* taps, std::size_t n);

// dst[i] = |src[i]|^2
void abs_squared(double* dst, const cd* src, std::size_t n);

// sum over |src[i]|^2
double sum_abs_squared(const cd* src, std::size_t n);

// max element; n must be >= 1
double max_value(const double* src, std::size_t n);

// dst[i] *= alpha
void scale(cd* dst, double alpha, std::size_t n);

// Active backend name: "avx2" or "scalar".
std::string_view backend();

// Pin the scalar reference path (test hook).
void force_scalar(bool on);

}  // namespace rfscene::kernels
