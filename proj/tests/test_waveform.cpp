#include <doctest.h>

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "rfscene/rng.hpp"
#include "rfscene/waveform.hpp"
#include "testutil.hpp"

using namespace rfscene;

namespace {

std::vector<std::uint8_t> bits_of(unsigned v, int width) {
    std::vector<std::uint8_t> bits(width);
    for (int i = 0; i < width; ++i) {
        bits[i] = (v >> (width - 1 - i)) & 1u;
    }
    return bits;
}

// Mean |s|^2 over the full constellation, via explicit enumeration.
double enumerated_mean_power(ModulationScheme s) {
    const int bps = bits_per_symbol(s);
    double acc = 0.0;
    for (unsigned v = 0; v < (1u << bps); ++v) {
        const auto sym = map_bits_to_symbols(bits_of(v, bps), s);
        acc += std::norm(sym[0]);
    }
    return acc / (1 << bps);
}

}  // namespace

TEST_CASE("qpsk maps 00 to the first-quadrant diagonal") {
    const auto sym = map_bits_to_symbols(std::vector<std::uint8_t>{0, 0},
                                         ModulationScheme::Qpsk);
    REQUIRE(sym.size() == 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(sym[0].real() == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(sym[0].imag() == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("empty bit sequence maps to no symbols") {
    CHECK(map_bits_to_symbols({}, ModulationScheme::Psk16).empty());
}

TEST_CASE("all constellations have unit average power") {
    for (int id = 0; id < kNumSchemes; ++id) {
        const auto s = scheme_from_id(id);
        CAPTURE(scheme_name(s));
        CHECK(enumerated_mean_power(s) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("psk mappings are gray coded") {
    for (auto s : {ModulationScheme::Qpsk, ModulationScheme::Psk8,
                   ModulationScheme::Psk16, ModulationScheme::Psk32}) {
        const auto& table = constellation(s);
        const int m = static_cast<int>(table.size());
        // Recover each bit value's position on the circle, then check that
        // neighbors differ in exactly one bit.
        std::vector<int> bits_at_position(m);
        for (int v = 0; v < m; ++v) {
            const double ang = std::arg(table[v]);
            const double k = (ang * m / (2.0 * std::numbers::pi)) - 0.5;
            int pos = static_cast<int>(std::lround(k));
            pos = ((pos % m) + m) % m;
            bits_at_position[pos] = v;
        }
        for (int p = 0; p < m; ++p) {
            const int a = bits_at_position[p];
            const int b = bits_at_position[(p + 1) % m];
            CAPTURE(scheme_name(s));
            CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
        }
    }
}

TEST_CASE("non-divisible bit count is rejected") {
    CHECK_THROWS_AS(map_bits_to_symbols(std::vector<std::uint8_t>{0, 1, 0},
                                        ModulationScheme::Qpsk),
                    std::invalid_argument);
}

TEST_CASE("single symbol pulse shape is the tap vector") {
    const int sps = 8, span = 8;
    const auto taps = rrc_taps(sps, 0.25, span);
    const std::vector<cd> one{cd{1.0, 0.0}};
    const auto out = pulse_shape(one, sps, 0.25, span);
    REQUIRE(out.size() == static_cast<std::size_t>((1 + span) * sps));
    for (std::size_t i = 0; i < taps.size(); ++i) {
        CHECK(out[i].real() == doctest::Approx(taps[i]).epsilon(1e-15));
        CHECK(out[i].imag() == 0.0);
    }
    for (std::size_t i = taps.size(); i < out.size(); ++i) {
        CHECK(out[i] == cd{0.0, 0.0});
    }
}

TEST_CASE("pulse shaping is a superposition of shifted taps") {
    const int sps = 4, span = 8;
    const cd a{0.5, -1.0}, b{-0.25, 0.75};
    const auto taps = rrc_taps(sps, 0.25, span);
    const auto out = pulse_shape(std::vector<cd>{a, b}, sps, 0.25, span);
    REQUIRE(out.size() == static_cast<std::size_t>((2 + span) * sps));
    for (std::size_t i = 0; i < out.size(); ++i) {
        cd want{0.0, 0.0};
        if (i < taps.size()) want += a * taps[i];
        if (i >= static_cast<std::size_t>(sps) && i - sps < taps.size()) {
            want += b * taps[i - sps];
        }
        CHECK(std::abs(out[i] - want) < 1e-15);
    }
}

TEST_CASE("pulse shape spectrum matches the raised-cosine occupancy") {
    // Independent periodogram oracle over a long random-QPSK run. The
    // 99%-power bandwidth of an RRC-shaped signal is obw_factor * R_s.
    Rng rng(0xbadc0de);
    const int n_sym = 20000;
    std::vector<std::uint8_t> bits(2 * n_sym);
    for (auto& b : bits) b = rng.bit();
    const auto symbols = map_bits_to_symbols(bits, ModulationScheme::Qpsk);
    const int sps = 8;
    auto shaped = pulse_shape(symbols, sps, 0.25, 8);

    const double fs = 1.0;  // normalized; R_s = fs / sps
    // Shift to band center so the occupied band does not wrap around DC.
    mix_to_carrier(shaped, 0.5 * fs, fs);
    const auto band = testutil::measure_band(shaped, fs);
    const double rs = fs / sps;
    const double want = rrc_occupied_bw_factor(0.25) * rs;
    CHECK(band.obw == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("occupied bandwidth factor") {
    // beta = 0.25: solve (b/2)[(1-u) - sin(pi u)/pi] = 0.005 -> u ~ 0.7063
    const double f = rrc_occupied_bw_factor(0.25);
    CHECK(f == doctest::Approx(1.1032).epsilon(1e-3));
    // brick-wall limit: central 99% of a flat unit band
    CHECK(rrc_occupied_bw_factor(0.0) == doctest::Approx(0.99));
}

TEST_CASE("cdma spreading definition and lengths") {
    const cd s{0.6, -0.8};
    const std::vector<double> pm{+1.0, -1.0};
    const auto chips = cdma_spread(std::vector<cd>{s}, pm);
    REQUIRE(chips.size() == 2);
    CHECK(chips[0] == s);
    CHECK(chips[1] == -s);

    Rng rng(3);
    std::vector<cd> syms(4);
    for (auto& v : syms) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto code = walsh_code(kCdmaCodeRow, 8);
    CHECK(cdma_spread(syms, code).size() == 32);

    CHECK_THROWS_AS(cdma_spread(syms, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("despreading with the matching walsh code recovers symbols exactly") {
    Rng rng(11);
    std::vector<std::uint8_t> bits(32);
    for (auto& b : bits) b = rng.bit();
    const auto syms = map_bits_to_symbols(bits, ModulationScheme::CdmaQpsk);
    const auto code = walsh_code(kCdmaCodeRow, kCdmaSpreadFactor);
    const auto chips = cdma_spread(syms, code);
    for (std::size_t i = 0; i < syms.size(); ++i) {
        // Pairwise sum: every partial is a power-of-two multiple of the
        // symbol, so the noise-free recovery is bit-exact.
        cd prod[kCdmaSpreadFactor];
        for (int k = 0; k < kCdmaSpreadFactor; ++k) {
            prod[k] = chips[i * kCdmaSpreadFactor + k] * code[k];
        }
        for (int step = 1; step < kCdmaSpreadFactor; step *= 2) {
            for (int k = 0; k + step < kCdmaSpreadFactor; k += 2 * step) {
                prod[k] += prod[k + step];
            }
        }
        const cd acc = prod[0] / static_cast<double>(kCdmaSpreadFactor);
        CHECK(acc.real() == syms[i].real());
        CHECK(acc.imag() == syms[i].imag());
    }
}

TEST_CASE("walsh codes are orthogonal") {
    for (int r1 = 0; r1 < 8; ++r1) {
        const auto c1 = walsh_code(r1, 8);
        for (int r2 = 0; r2 < 8; ++r2) {
            const auto c2 = walsh_code(r2, 8);
            double dot = 0.0;
            for (int i = 0; i < 8; ++i) dot += c1[i] * c2[i];
            CHECK(dot == (r1 == r2 ? 8.0 : 0.0));
        }
    }
}

TEST_CASE("ofdm single loaded subcarrier is a complex exponential") {
    const int n = 64;
    for (int k : {1, 5, 63}) {
        std::vector<cd> freq(n, cd{0.0, 0.0});
        freq[k] = {1.0, 0.0};
        const auto out = ofdm_modulate(freq, n, 0);
        REQUIRE(out.size() == static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const double ang = 2.0 * std::numbers::pi * k * t / n;
            CHECK(std::abs(out[t] - cd{std::cos(ang), std::sin(ang)}) < 1e-12);
        }
    }
}

TEST_CASE("ofdm output length and cyclic prefix") {
    Rng rng(21);
    const int n = 64, cp = 16, blocks = 2;
    std::vector<cd> freq(n * blocks);
    for (auto& v : freq) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto out = ofdm_modulate(freq, n, cp);
    CHECK(out.size() == static_cast<std::size_t>((n + cp) * blocks));
    for (int b = 0; b < blocks; ++b) {
        const cd* blk = out.data() + b * (n + cp);
        for (int i = 0; i < cp; ++i) {
            CHECK(blk[i] == blk[n + i]);  // prefix == tail of the body
        }
    }
    CHECK_THROWS_AS(ofdm_modulate(std::vector<cd>(65), 64, 16),
                    std::invalid_argument);
}

TEST_CASE("burst length follows the duration fraction") {
    BurstParams p;
    p.scheme = ModulationScheme::Qpsk;
    p.duration_frac = 0.2;
    const auto sig = synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 1234);
    CHECK(sig.samples.size() == 819);  // floor(0.2 * 4096)
}

TEST_CASE("zero dB snr means burst power equals in-band noise power") {
    BurstParams p;
    p.scheme = ModulationScheme::Qam16;
    p.snr_db = 0.0;
    p.half_bw_hz = 40e6;
    const double fs = 500e6;
    const auto sig = synthesize_burst(p, 4096, fs, 1.0 / fs, 77);
    double acc = 0.0;
    for (const auto& v : sig.samples) acc += std::norm(v);
    const double measured = acc / sig.samples.size();
    const double in_band_noise = 2.0 * p.half_bw_hz / fs;  // N0 = 1 per sample
    CHECK(measured == doctest::Approx(in_band_noise).epsilon(1e-12));
    CHECK(sig.mean_power == doctest::Approx(in_band_noise).epsilon(1e-12));
}

TEST_CASE("identical params and seed give bit-identical bursts") {
    BurstParams p;
    p.scheme = ModulationScheme::OfdmQpsk;
    p.carrier_hz = 222e6;
    const auto a = synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 555);
    const auto b = synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 555);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i] == b.samples[i]);
    }
}

TEST_CASE("amplitude scales every sample exactly") {
    BurstParams p;
    p.scheme = ModulationScheme::Psk8;
    const double alpha = 0.37;
    const auto unit = synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 99);
    const auto scaled = synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 99, alpha);
    REQUIRE(unit.samples.size() == scaled.samples.size());
    for (std::size_t i = 0; i < unit.samples.size(); ++i) {
        CHECK(scaled.samples[i] == unit.samples[i] * alpha);
    }
}

TEST_CASE("burst shorter than a symbol period is rejected") {
    BurstParams p;
    p.scheme = ModulationScheme::Qpsk;
    p.half_bw_hz = 20e6;   // ~17 samples per symbol at 500 MHz
    p.duration_frac = 0.003;  // 12 samples
    CHECK_THROWS_AS(synthesize_burst(p, 4096, 500e6, 1.0 / 500e6, 1),
                    std::invalid_argument);
}

TEST_CASE("carrier placement: constant-symbol burst peaks at the carrier bin") {
    // Random payloads have a flat occupied band, so the spectral argmax is
    // only meaningful for a carrier-concentrated burst: all-zero bits give a
    // constant QPSK symbol stream, i.e. a pure tone at the carrier.
    const double fs = 500e6;
    for (double fc : {120e6, 250e6, 399e6}) {
        std::vector<std::uint8_t> bits(512, 0);
        const auto symbols = map_bits_to_symbols(bits, ModulationScheme::Qpsk);
        auto shaped = pulse_shape(symbols, 8, kRolloff, kRrcSpanSymbols);
        mix_to_carrier(shaped, fc, fs);
        const auto band = testutil::measure_band(shaped, fs);
        const auto want =
            static_cast<long>(std::llround(fc / fs * static_cast<double>(band.fft_size)));
        CAPTURE(fc);
        CHECK(std::abs(static_cast<long>(band.argmax_bin) - want) <= 1);
    }
}

TEST_CASE("per-scheme occupied bandwidth tracks the configured value") {
    const double fs = 500e6;
    for (int id = 0; id < kNumSchemes; ++id) {
        BurstParams p;
        p.scheme = scheme_from_id(id);
        p.carrier_hz = 250e6;
        p.half_bw_hz = 50e6;
        p.duration_frac = 1.0;
        p.snr_db = 20.0;
        // Average the periodogram over several payloads before measuring.
        const auto probe = synthesize_burst(p, 4096, fs, 1.0 / fs, 1);
        const std::size_t n = next_power_of_two(2 * probe.samples.size());
        std::vector<double> avg(n, 0.0);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const auto sig = synthesize_burst(p, 4096, fs, 1.0 / fs, seed);
            std::vector<cd> buf(n, cd{0.0, 0.0});
            std::copy(sig.samples.begin(), sig.samples.end(), buf.begin());
            FftPlan plan(n);
            plan.forward(buf.data());
            for (std::size_t k = 0; k < n; ++k) avg[k] += std::norm(buf[k]);
        }
        double total = 0.0;
        for (double v : avg) total += v;
        double cum = 0.0, f_lo = 0.0, f_hi = fs;
        bool lo_set = false;
        for (std::size_t k = 0; k < n; ++k) {
            cum += avg[k];
            if (!lo_set && cum >= 0.005 * total) {
                f_lo = (k + 0.5) * fs / n;
                lo_set = true;
            }
            if (cum >= 0.995 * total) {
                f_hi = (k + 0.5) * fs / n;
                break;
            }
        }
        const double obw = f_hi - f_lo;
        CAPTURE(scheme_name(p.scheme));
        CHECK(obw == doctest::Approx(2.0 * p.half_bw_hz).epsilon(0.10));
    }
}
