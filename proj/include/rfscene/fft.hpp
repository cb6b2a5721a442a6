#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rfscene {

/// In-place complex FFT. Power-of-two sizes run an iterative radix-2
/// transform; other sizes fall back to Bluestein's chirp-z algorithm.
/// Forward transform is unnormalized: X[k] = sum_n x[n] exp(-2*pi*i*n*k/N).
/// Inverse is unnormalized as well (scale by 1/N to invert).
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;

private:
    void transform_pow2(std::complex<double>* data, bool inv) const;
    void transform_bluestein(std::complex<double>* data, bool inv) const;

    std::size_t n_ = 0;
    bool pow2_ = false;
    std::vector<std::complex<double>> twiddle_;      // n/2 forward roots
    std::vector<std::uint32_t> bitrev_;

    // Bluestein state
    std::size_t conv_n_ = 0;
    std::vector<std::complex<double>> chirp_;        // exp(-i*pi*k^2/n)
    std::vector<std::complex<double>> chirp_fft_;    // FFT of conjugate chirp
    std::vector<std::complex<double>> conv_twiddle_;
    std::vector<std::uint32_t> conv_bitrev_;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace rfscene
