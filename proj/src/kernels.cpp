#include "rfscene/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace rfscene::kernels {

namespace detail {

void multiply_real_scalar(cd* dst, const cd* src, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = cd(src[i].real() * w[i], src[i].imag() * w[i]);
    }
}

void accumulate_scalar(cd* dst, const cd* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void axpy_real_scalar(cd* dst, cd alpha, const double* taps, std::size_t n) {
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = cd(dst[i].real() + ar * taps[i], dst[i].imag() + ai * taps[i]);
    }
}

void abs_squared_scalar(double* dst, const cd* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = src[i].real();
        const double im = src[i].imag();
        dst[i] = re * re + im * im;
    }
}

double sum_abs_squared_scalar(const cd* src, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = src[i].real();
        const double im = src[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

double max_value_scalar(const double* src, std::size_t n) {
    double m = src[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (src[i] > m) m = src[i];
    }
    return m;
}

void scale_scalar(cd* dst, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = cd(dst[i].real() * alpha, dst[i].imag() * alpha);
    }
}

namespace {

bool avx2_available() {
#if defined(RFSCENE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool simd_enabled_at_startup() {
    const char* env = std::getenv("RFSCENE_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return false;
    return avx2_available();
}

std::atomic<bool> g_use_simd{simd_enabled_at_startup()};

inline bool use_simd() { return g_use_simd.load(std::memory_order_relaxed); }

}  // namespace

}  // namespace detail

using namespace detail;

void multiply_real(cd* dst, const cd* src, const double* w, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return multiply_real_avx2(dst, src, w, n);
#endif
    multiply_real_scalar(dst, src, w, n);
}

void accumulate(cd* dst, const cd* src, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return accumulate_avx2(dst, src, n);
#endif
    accumulate_scalar(dst, src, n);
}

void axpy_real(cd* dst, cd alpha, const double* taps, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return axpy_real_avx2(dst, alpha, taps, n);
#endif
    axpy_real_scalar(dst, alpha, taps, n);
}

void abs_squared(double* dst, const cd* src, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return abs_squared_avx2(dst, src, n);
#endif
    abs_squared_scalar(dst, src, n);
}

double sum_abs_squared(const cd* src, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return sum_abs_squared_avx2(src, n);
#endif
    return sum_abs_squared_scalar(src, n);
}

double max_value(const double* src, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return max_value_avx2(src, n);
#endif
    return max_value_scalar(src, n);
}

void scale(cd* dst, double alpha, std::size_t n) {
#if defined(RFSCENE_HAVE_AVX2)
    if (use_simd()) return scale_avx2(dst, alpha, n);
#endif
    scale_scalar(dst, alpha, n);
}

std::string_view backend() {
    return detail::use_simd() ? "avx2" : "scalar";
}

void force_scalar(bool on) {
    if (on) {
        detail::g_use_simd.store(false, std::memory_order_relaxed);
    } else {
        detail::g_use_simd.store(detail::simd_enabled_at_startup(),
                                 std::memory_order_relaxed);
    }
}

}  // namespace rfscene::kernels
