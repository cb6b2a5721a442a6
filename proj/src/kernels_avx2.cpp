// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma; only reached after a
// runtime __builtin_cpu_supports check in kernels.cpp.

#if defined(RFSCENE_HAVE_AVX2)

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace rfscene::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    double a = _mm_cvtsd_f64(lo);
    double b = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    return a > b ? a : b;
}

// {w[i], w[i], w[i+1], w[i+1]} for pairing real weights with interleaved
// complex samples.
inline __m256d dup_pairs(const double* w, std::size_t i) {
    __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w + i));
    return _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 1, 0, 0));
}

}  // namespace

void multiply_real_avx2(cd* dst, const cd* src, const double* w, std::size_t n) {
    auto* d = reinterpret_cast<double*>(dst);
    const auto* s = reinterpret_cast<const double*>(src);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d sv = _mm256_loadu_pd(s + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(sv, dup_pairs(w, i)));
    }
    for (; i < n; ++i) {
        dst[i] = cd(src[i].real() * w[i], src[i].imag() * w[i]);
    }
}

void accumulate_avx2(cd* dst, const cd* src, std::size_t n) {
    auto* d = reinterpret_cast<double*>(dst);
    const auto* s = reinterpret_cast<const double*>(src);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d dv = _mm256_loadu_pd(d + 2 * i);
        __m256d sv = _mm256_loadu_pd(s + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(dv, sv));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

void axpy_real_avx2(cd* dst, cd alpha, const double* taps, std::size_t n) {
    auto* d = reinterpret_cast<double*>(dst);
    const __m256d av = _mm256_setr_pd(alpha.real(), alpha.imag(),
                                      alpha.real(), alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d dv = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_fmadd_pd(av, dup_pairs(taps, i), dv));
    }
    for (; i < n; ++i) {
        dst[i] = cd(dst[i].real() + alpha.real() * taps[i],
                    dst[i].imag() + alpha.imag() * taps[i]);
    }
}

void abs_squared_avx2(double* dst, const cd* src, std::size_t n) {
    const auto* s = reinterpret_cast<const double*>(src);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(s + 2 * i);      // r0 i0 r1 i1
        __m256d b = _mm256_loadu_pd(s + 2 * i + 4);  // r2 i2 r3 i3
        __m256d aa = _mm256_mul_pd(a, a);
        __m256d bb = _mm256_mul_pd(b, b);
        // hadd yields {p0, p2, p1, p3}; permute back to index order
        __m256d p = _mm256_hadd_pd(aa, bb);
        _mm256_storeu_pd(dst + i, _mm256_permute4x64_pd(p, _MM_SHUFFLE(3, 1, 2, 0)));
    }
    for (; i < n; ++i) {
        const double re = src[i].real();
        const double im = src[i].imag();
        dst[i] = re * re + im * im;
    }
}

double sum_abs_squared_avx2(const cd* src, std::size_t n) {
    const auto* s = reinterpret_cast<const double*>(src);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(s + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double re = src[i].real();
        const double im = src[i].imag();
        total += re * re + im * im;
    }
    return total;
}

double max_value_avx2(const double* src, std::size_t n) {
    if (n < 4) return max_value_scalar(src, n);
    __m256d m = _mm256_loadu_pd(src);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, _mm256_loadu_pd(src + i));
    }
    double best = hmax(m);
    for (; i < n; ++i) {
        if (src[i] > best) best = src[i];
    }
    return best;
}

void scale_avx2(cd* dst, double alpha, std::size_t n) {
    auto* d = reinterpret_cast<double*>(dst);
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), av));
    }
    for (; i < n; ++i) {
        dst[i] = cd(dst[i].real() * alpha, dst[i].imag() * alpha);
    }
}

}  // namespace rfscene::kernels::detail

#endif  // RFSCENE_HAVE_AVX2
