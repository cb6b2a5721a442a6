#include "rfscene/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfscene/fft.hpp"
#include "rfscene/kernels.hpp"

namespace rfscene {

namespace {

constexpr double kPi = std::numbers::pi;

double cosine_sum(double x, std::span<const double> a) {
    // sum_k (-1)^k a[k] cos(k*x)
    double v = 0.0;
    double sign = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        v += sign * a[k] * std::cos(static_cast<double>(k) * x);
        sign = -sign;
    }
    return v;
}

double window_value(WindowType type, int n, int length) {
    const double ln = length - 1;
    const double x = 2.0 * kPi * n / ln;
    switch (type) {
        case WindowType::Hann: {
            static constexpr double a[] = {0.5, 0.5};
            return cosine_sum(x, a);
        }
        case WindowType::Hamming: {
            static constexpr double a[] = {0.54, 0.46};
            return cosine_sum(x, a);
        }
        case WindowType::Blackman: {
            static constexpr double a[] = {0.42, 0.5, 0.08};
            return cosine_sum(x, a);
        }
        case WindowType::Nuttall: {
            // Nuttall's minimum 4-term Blackman-Harris
            static constexpr double a[] = {0.3635819, 0.4891775, 0.1365995,
                                           0.0106411};
            return cosine_sum(x, a);
        }
        case WindowType::FlatTop: {
            static constexpr double a[] = {0.21557895, 0.41663158, 0.277263158,
                                           0.083578947, 0.006947368};
            return cosine_sum(x, a);
        }
        case WindowType::Rectangular:
            return 1.0;
        case WindowType::Gaussian: {
            const double sigma = ln / 5.0;
            const double d = n - 0.5 * ln;
            return std::exp(-0.5 * (d / sigma) * (d / sigma));
        }
        case WindowType::TaperedCosine: {
            // Tukey window, taper ratio 0.5
            const double taper = 0.25 * ln;  // alpha * (L-1) / 2
            const double t = static_cast<double>(n);
            if (t < taper) {
                return 0.5 * (1.0 + std::cos(kPi * (t / taper - 1.0)));
            }
            return 1.0;  // flat middle; upper half mirrored by caller
        }
        case WindowType::Bohman: {
            const double u = std::abs(2.0 * n / ln - 1.0);
            return (1.0 - u) * std::cos(kPi * u) + std::sin(kPi * u) / kPi;
        }
    }
    throw std::invalid_argument("unknown window type");
}

}  // namespace

std::string_view window_name(WindowType w) {
    switch (w) {
        case WindowType::Hann: return "hann";
        case WindowType::Gaussian: return "gaussian";
        case WindowType::Hamming: return "hamming";
        case WindowType::Blackman: return "blackman";
        case WindowType::Rectangular: return "rectangular";
        case WindowType::Bohman: return "bohman";
        case WindowType::TaperedCosine: return "taperedcosine";
        case WindowType::FlatTop: return "flattop";
        case WindowType::Nuttall: return "nuttall";
    }
    throw std::invalid_argument("unknown window type");
}

WindowType window_from_name(std::string_view name) {
    for (int i = 0; i < kNumWindowTypes; ++i) {
        const auto w = static_cast<WindowType>(i);
        if (name == window_name(w)) return w;
    }
    throw std::invalid_argument("unknown window name: " + std::string(name));
}

std::vector<double> make_window(WindowType type, int length) {
    if (length < 2) throw std::invalid_argument("window length must be >= 2");
    std::vector<double> w(length);
    // Evaluate the lower half and mirror, so w[n] == w[L-1-n] bit-exactly.
    const int half = length / 2;
    for (int n = 0; n < half; ++n) {
        w[n] = window_value(type, n, length);
        w[length - 1 - n] = w[n];
    }
    if (length % 2 == 1) w[half] = window_value(type, half, length);
    const double peak = kernels::max_value(w.data(), w.size());
    if (peak <= 0.0) {
        throw std::invalid_argument("window is degenerate at this length");
    }
    if (peak != 1.0) {
        for (double& v : w) v /= peak;
    }
    return w;
}

int StftConfig::hop() const {
    const double raw = window_len * (1.0 - overlap);
    const int h = static_cast<int>(std::floor(raw + 0.5));  // round half up
    return std::max(1, h);
}

void StftConfig::validate() const {
    if (window_len < 2) throw std::invalid_argument("window length must be >= 2");
    if (fft_size < window_len) {
        throw std::invalid_argument("fft_size must be >= window length");
    }
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw std::invalid_argument("overlap must be in [0, 1)");
    }
}

std::string StftConfig::label() const {
    const int pct = static_cast<int>(std::lround(overlap * 100.0));
    return "W" + std::to_string(window_len) + "F" + std::to_string(fft_size) +
           "_" + std::string(window_name(window)) + "_ov" + std::to_string(pct);
}

std::size_t stft_frame_count(std::size_t n_samples, const StftConfig& cfg) {
    const auto w = static_cast<std::size_t>(cfg.window_len);
    if (n_samples < w) return 0;
    return (n_samples - w) / static_cast<std::size_t>(cfg.hop()) + 1;
}

ComplexFrames stft(std::span<const cd> iq, const StftConfig& cfg,
                   double sample_rate_hz) {
    cfg.validate();
    if (iq.size() < static_cast<std::size_t>(cfg.window_len)) {
        throw std::invalid_argument("buffer shorter than the analysis window");
    }
    const std::size_t n_frames = stft_frame_count(iq.size(), cfg);
    const auto fft_n = static_cast<std::size_t>(cfg.fft_size);
    const auto window = make_window(cfg.window, cfg.window_len);
    const auto hop = static_cast<std::size_t>(cfg.hop());

    ComplexFrames out;
    out.n_frames = n_frames;
    out.fft_size = fft_n;
    out.config = cfg;
    out.sample_rate_hz = sample_rate_hz;
    out.n_samples = iq.size();
    out.data.assign(n_frames * fft_n, cd{0.0, 0.0});

    FftPlan plan(fft_n);
    for (std::size_t m = 0; m < n_frames; ++m) {
        cd* frame = out.frame(m);
        kernels::multiply_real(frame, iq.data() + m * hop, window.data(),
                               window.size());
        plan.forward(frame);
    }
    return out;
}

ComplexFrames stft(const IqBuffer& iq, const StftConfig& cfg) {
    return stft(std::span<const cd>(iq.samples), cfg, iq.sample_rate_hz);
}

namespace {

Spectrogram finish_db(std::vector<double>&& power, std::size_t n_frames,
                      std::size_t n_bins, std::size_t n_samples,
                      const StftConfig& cfg, double fs, double floor_db) {
    if (!(floor_db < 0.0)) throw std::invalid_argument("floor_db must be negative");
    Spectrogram sg;
    sg.n_frames = n_frames;
    sg.n_bins = n_bins;
    sg.n_samples = n_samples;
    sg.config = cfg;
    sg.floor_db = floor_db;
    sg.db = std::move(power);

    const double max_p =
        sg.db.empty() ? 0.0 : kernels::max_value(sg.db.data(), sg.db.size());
    if (max_p <= 0.0) {
        std::fill(sg.db.begin(), sg.db.end(), floor_db);
    } else {
        const double inv = 1.0 / max_p;
        for (double& v : sg.db) {
            v = v <= 0.0 ? floor_db
                         : std::max(10.0 * std::log10(v * inv), floor_db);
        }
    }

    sg.frame_times.resize(n_frames);
    const double hop = cfg.hop();
    for (std::size_t m = 0; m < n_frames; ++m) {
        sg.frame_times[m] = (m * hop + 0.5 * cfg.window_len) / fs;
    }
    sg.bin_freqs.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        sg.bin_freqs[k] = static_cast<double>(k) * fs / static_cast<double>(n_bins);
    }
    return sg;
}

}  // namespace

Spectrogram to_db(const ComplexFrames& frames, double floor_db) {
    std::vector<double> power(frames.data.size());
    kernels::abs_squared(power.data(), frames.data.data(), frames.data.size());
    return finish_db(std::move(power), frames.n_frames, frames.fft_size,
                     frames.n_samples, frames.config, frames.sample_rate_hz,
                     floor_db);
}

Spectrogram spectrogram(std::span<const cd> iq, double fs, const StftConfig& cfg,
                        double floor_db) {
    cfg.validate();
    if (iq.size() < static_cast<std::size_t>(cfg.window_len)) {
        throw std::invalid_argument("buffer shorter than the analysis window");
    }
    const std::size_t n_frames = stft_frame_count(iq.size(), cfg);
    const auto fft_n = static_cast<std::size_t>(cfg.fft_size);
    const auto window = make_window(cfg.window, cfg.window_len);
    const auto hop = static_cast<std::size_t>(cfg.hop());

    std::vector<double> power(n_frames * fft_n);
    FftPlan plan(fft_n);
    std::vector<cd> frame(fft_n);
    for (std::size_t m = 0; m < n_frames; ++m) {
        std::fill(frame.begin(), frame.end(), cd{0.0, 0.0});
        kernels::multiply_real(frame.data(), iq.data() + m * hop, window.data(),
                               window.size());
        plan.forward(frame.data());
        kernels::abs_squared(power.data() + m * fft_n, frame.data(), fft_n);
    }
    return finish_db(std::move(power), n_frames, fft_n, iq.size(), cfg, fs,
                     floor_db);
}

Spectrogram spectrogram(const IqBuffer& iq, const StftConfig& cfg,
                        double floor_db) {
    return spectrogram(std::span<const cd>(iq.samples), iq.sample_rate_hz, cfg,
                       floor_db);
}

}  // namespace rfscene
