#include "rfscene/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfscene {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::complex<double>> make_twiddles(std::size_t n) {
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    return tw;
}

std::vector<std::uint32_t> make_bitrev(std::size_t n) {
    std::vector<std::uint32_t> rev(n, 0);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        }
        rev[i] = static_cast<std::uint32_t>(r);
    }
    return rev;
}

// Radix-2 DIT over precomputed tables.
void fft_pow2(std::complex<double>* a, std::size_t n,
              const std::vector<std::complex<double>>& tw,
              const std::vector<std::uint32_t>& rev, bool inv) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                std::complex<double> w = tw[k * stride];
                if (inv) w = std::conj(w);
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: size must be positive");
    pow2_ = is_power_of_two(n);
    if (pow2_) {
        twiddle_ = make_twiddles(n);
        bitrev_ = make_bitrev(n);
        return;
    }
    // Bluestein: circular convolution of length >= 2n-1 at a power of two.
    conv_n_ = next_power_of_two(2 * n - 1);
    conv_twiddle_ = make_twiddles(conv_n_);
    conv_bitrev_ = make_bitrev(conv_n_);
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the argument small and the angle exact.
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp_[k] = {std::cos(ang), std::sin(ang)};
    }
    chirp_fft_.assign(conv_n_, {0.0, 0.0});
    chirp_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
        chirp_fft_[k] = std::conj(chirp_[k]);
        chirp_fft_[conv_n_ - k] = std::conj(chirp_[k]);
    }
    fft_pow2(chirp_fft_.data(), conv_n_, conv_twiddle_, conv_bitrev_, false);
}

void FftPlan::transform_pow2(std::complex<double>* data, bool inv) const {
    fft_pow2(data, n_, twiddle_, bitrev_, inv);
}

void FftPlan::transform_bluestein(std::complex<double>* data, bool inv) const {
    std::vector<std::complex<double>> buf(conv_n_, {0.0, 0.0});
    for (std::size_t k = 0; k < n_; ++k) {
        const std::complex<double> c = inv ? std::conj(chirp_[k]) : chirp_[k];
        buf[k] = data[k] * c;
    }
    fft_pow2(buf.data(), conv_n_, conv_twiddle_, conv_bitrev_, false);
    if (inv) {
        for (std::size_t k = 0; k < conv_n_; ++k) buf[k] *= std::conj(chirp_fft_[k]);
    } else {
        for (std::size_t k = 0; k < conv_n_; ++k) buf[k] *= chirp_fft_[k];
    }
    fft_pow2(buf.data(), conv_n_, conv_twiddle_, conv_bitrev_, true);
    const double norm = 1.0 / static_cast<double>(conv_n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const std::complex<double> c = inv ? std::conj(chirp_[k]) : chirp_[k];
        data[k] = buf[k] * norm * c;
    }
}

void FftPlan::forward(std::complex<double>* data) const {
    if (pow2_) {
        transform_pow2(data, false);
    } else {
        transform_bluestein(data, false);
    }
}

void FftPlan::inverse(std::complex<double>* data) const {
    if (pow2_) {
        transform_pow2(data, true);
    } else {
        transform_bluestein(data, true);
    }
}

}  // namespace rfscene
