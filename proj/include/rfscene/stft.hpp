#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfscene/waveform.hpp"

namespace rfscene {

enum class WindowType : int {
    Hann = 0,
    Gaussian = 1,
    Hamming = 2,
    Blackman = 3,
    Rectangular = 4,
    Bohman = 5,
    TaperedCosine = 6,
    FlatTop = 7,
    Nuttall = 8,
};

constexpr int kNumWindowTypes = 9;

std::string_view window_name(WindowType w);
WindowType window_from_name(std::string_view name);

// Symmetric window of the given length, peak exactly 1. length >= 2.
std::vector<double> make_window(WindowType type, int length);

struct StftConfig {
    WindowType window = WindowType::Hamming;
    int window_len = 128;
    int fft_size = 128;
    double overlap = 0.5;

    int hop() const;
    void validate() const;
    std::string label() const;  // e.g. "W128F128_hamming_ov50"
};

// frames x fft_size complex STFT frames, row-major.
struct ComplexFrames {
    std::size_t n_frames = 0;
    std::size_t fft_size = 0;
    std::vector<std::complex<double>> data;
    StftConfig config;
    double sample_rate_hz = 1.0;
    std::size_t n_samples = 0;  // source buffer length

    std::complex<double>* frame(std::size_t m) { return data.data() + m * fft_size; }
    const std::complex<double>* frame(std::size_t m) const {
        return data.data() + m * fft_size;
    }
};

std::size_t stft_frame_count(std::size_t n_samples, const StftConfig& cfg);

// Unnormalized forward transforms of windowed frames, zero-padded to
// fft_size. No edge padding; a trailing partial frame is discarded.
ComplexFrames stft(std::span<const cd> iq, const StftConfig& cfg,
                   double sample_rate_hz = 1.0);
ComplexFrames stft(const IqBuffer& iq, const StftConfig& cfg);

struct Spectrogram {
    std::size_t n_frames = 0;
    std::size_t n_bins = 0;
    std::size_t n_samples = 0;  // source buffer length
    std::vector<double> db;  // row-major frames x bins, in [floor_db, 0]
    std::vector<double> frame_times;  // frame centers, seconds
    std::vector<double> bin_freqs;    // Hz, [0, fs)
    StftConfig config;
    double floor_db = -80.0;

    double at(std::size_t frame, std::size_t bin) const {
        return db[frame * n_bins + bin];
    }
};

constexpr double kDefaultFloorDb = -80.0;

// Peak-normalized dB magnitude: max(20*log10(|X|/max|X|), floor_db).
Spectrogram to_db(const ComplexFrames& frames, double floor_db);

// stft + to_db without retaining the complex frames (memory-lean path used
// by dataset generation; numerically identical to to_db(stft(...))).
Spectrogram spectrogram(std::span<const cd> iq, double fs, const StftConfig& cfg,
                        double floor_db = kDefaultFloorDb);
Spectrogram spectrogram(const IqBuffer& iq, const StftConfig& cfg,
                        double floor_db = kDefaultFloorDb);

}  // namespace rfscene
