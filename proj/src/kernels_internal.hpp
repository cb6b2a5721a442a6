#pragma once

#include "rfscene/kernels.hpp"

namespace rfscene::kernels::detail {

void multiply_real_scalar(cd* dst, const cd* src, const double* w, std::size_t n);
void accumulate_scalar(cd* dst, const cd* src, std::size_t n);
void axpy_real_scalar(cd* dst, cd alpha, const double* taps, std::size_t n);
void abs_squared_scalar(double* dst, const cd* src, std::size_t n);
double sum_abs_squared_scalar(const cd* src, std::size_t n);
double max_value_scalar(const double* src, std::size_t n);
void scale_scalar(cd* dst, double alpha, std::size_t n);

#if defined(RFSCENE_HAVE_AVX2)
void multiply_real_avx2(cd* dst, const cd* src, const double* w, std::size_t n);
void accumulate_avx2(cd* dst, const cd* src, std::size_t n);
void axpy_real_avx2(cd* dst, cd alpha, const double* taps, std::size_t n);
void abs_squared_avx2(double* dst, const cd* src, std::size_t n);
double sum_abs_squared_avx2(const cd* src, std::size_t n);
double max_value_avx2(const double* src, std::size_t n);
void scale_avx2(cd* dst, double alpha, std::size_t n);
#endif

}  // namespace rfscene::kernels::detail
