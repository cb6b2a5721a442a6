#include "rfscene/waveform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfscene/fft.hpp"
#include "rfscene/kernels.hpp"
#include "rfscene/rng.hpp"

namespace rfscene {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cd> make_psk(int order) {
    // table[gray(k)] = exp(i*(2k+1)*pi/M) so adjacent phases differ in one bit
    std::vector<cd> table(order);
    for (int k = 0; k < order; ++k) {
        const int bits = k ^ (k >> 1);
        const double ang = (2.0 * k + 1.0) * kPi / order;
        table[bits] = {std::cos(ang), std::sin(ang)};
    }
    return table;
}

std::vector<cd> make_qam16() {
    // Per-axis Gray levels: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
    static constexpr double level[4] = {-3.0, -1.0, +3.0, +1.0};
    const double norm = 1.0 / std::sqrt(10.0);
    std::vector<cd> table(16);
    for (int v = 0; v < 16; ++v) {
        const double i = level[(v >> 2) & 3];
        const double q = level[v & 3];
        table[v] = {i * norm, q * norm};
    }
    return table;
}

std::vector<cd> make_qam32() {
    // Cross constellation: 6x6 grid of odd levels minus the four corners.
    // Two Gray quadrant bits select signs; three bits pick one of the eight
    // points of a quadrant's 3x3 cell with its outer corner removed.
    static constexpr double sign_i[4] = {+1.0, -1.0, +1.0, -1.0};  // 00,01,10,11
    static constexpr double sign_q[4] = {+1.0, +1.0, -1.0, -1.0};
    static constexpr double pos[8][2] = {
        {1, 1}, {1, 3}, {3, 3}, {3, 1}, {5, 1}, {5, 3}, {3, 5}, {1, 5},
    };
    const double norm = 1.0 / std::sqrt(20.0);
    std::vector<cd> table(32);
    for (int v = 0; v < 32; ++v) {
        const int quad = (v >> 3) & 3;
        const int p = v & 7;
        table[v] = {sign_i[quad] * pos[p][0] * norm, sign_q[quad] * pos[p][1] * norm};
    }
    return table;
}

const std::vector<cd>& qpsk_table() {
    static const std::vector<cd> t = make_psk(4);
    return t;
}

}  // namespace

std::string_view scheme_name(ModulationScheme s) {
    switch (s) {
        case ModulationScheme::Qpsk: return "QPSK";
        case ModulationScheme::Psk8: return "8PSK";
        case ModulationScheme::Psk16: return "16PSK";
        case ModulationScheme::Psk32: return "32PSK";
        case ModulationScheme::Qam16: return "16QAM";
        case ModulationScheme::Qam32: return "32QAM";
        case ModulationScheme::CdmaQpsk: return "CDMA-QPSK";
        case ModulationScheme::OfdmQpsk: return "OFDM-QPSK";
    }
    throw std::invalid_argument("unknown modulation scheme");
}

ModulationScheme scheme_from_id(int id) {
    if (id < 0 || id >= kNumSchemes) {
        throw std::invalid_argument("modulation class id out of range");
    }
    return static_cast<ModulationScheme>(id);
}

int bits_per_symbol(ModulationScheme s) {
    switch (s) {
        case ModulationScheme::Qpsk: return 2;
        case ModulationScheme::Psk8: return 3;
        case ModulationScheme::Psk16: return 4;
        case ModulationScheme::Psk32: return 5;
        case ModulationScheme::Qam16: return 4;
        case ModulationScheme::Qam32: return 5;
        case ModulationScheme::CdmaQpsk: return 2;
        case ModulationScheme::OfdmQpsk: return 2;
    }
    throw std::invalid_argument("unknown modulation scheme");
}

const std::vector<cd>& constellation(ModulationScheme s) {
    static const std::vector<cd> psk8 = make_psk(8);
    static const std::vector<cd> psk16 = make_psk(16);
    static const std::vector<cd> psk32 = make_psk(32);
    static const std::vector<cd> qam16 = make_qam16();
    static const std::vector<cd> qam32 = make_qam32();
    switch (s) {
        case ModulationScheme::Qpsk:
        case ModulationScheme::CdmaQpsk:
        case ModulationScheme::OfdmQpsk:
            return qpsk_table();
        case ModulationScheme::Psk8: return psk8;
        case ModulationScheme::Psk16: return psk16;
        case ModulationScheme::Psk32: return psk32;
        case ModulationScheme::Qam16: return qam16;
        case ModulationScheme::Qam32: return qam32;
    }
    throw std::invalid_argument("unknown modulation scheme");
}

std::vector<cd> map_bits_to_symbols(std::span<const std::uint8_t> bits,
                                    ModulationScheme s) {
    const int bps = bits_per_symbol(s);
    if (bits.size() % static_cast<std::size_t>(bps) != 0) {
        throw std::invalid_argument("bit count not divisible by bits per symbol");
    }
    const auto& table = constellation(s);
    std::vector<cd> out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps) {
        unsigned v = 0;
        for (int b = 0; b < bps; ++b) v = (v << 1) | (bits[i + b] & 1u);
        out.push_back(table[v]);
    }
    return out;
}

double rrc_pulse(double t, double rolloff) {
    const double b = rolloff;
    const double at = std::abs(t);
    if (at < 1e-10) {
        return 1.0 - b + 4.0 * b / kPi;
    }
    if (b > 0.0 && std::abs(4.0 * b * at - 1.0) < 1e-8) {
        const double s = std::sin(kPi / (4.0 * b));
        const double c = std::cos(kPi / (4.0 * b));
        return b / std::sqrt(2.0) *
               ((1.0 + 2.0 / kPi) * s + (1.0 - 2.0 / kPi) * c);
    }
    const double num = std::sin(kPi * t * (1.0 - b)) +
                       4.0 * b * t * std::cos(kPi * t * (1.0 + b));
    const double den = kPi * t * (1.0 - 16.0 * b * b * t * t);
    return num / den;
}

std::vector<double> rrc_taps(int sps, double rolloff, int span) {
    if (sps < 1) throw std::invalid_argument("samples_per_symbol must be >= 1");
    if (rolloff <= 0.0 || rolloff > 1.0) {
        throw std::invalid_argument("rolloff must be in (0, 1]");
    }
    const int len = span * sps + 1;
    const double center = 0.5 * span * sps;
    std::vector<double> taps(len);
    double energy = 0.0;
    for (int k = 0; k < len; ++k) {
        const double t = (k - center) / sps;
        taps[k] = rrc_pulse(t, rolloff);
        energy += taps[k] * taps[k];
    }
    const double norm = 1.0 / std::sqrt(energy);
    for (double& v : taps) v *= norm;
    return taps;
}

std::vector<cd> pulse_shape(std::span<const cd> symbols, int samples_per_symbol,
                            double rolloff, int span_symbols) {
    if (samples_per_symbol < 1) {
        throw std::invalid_argument("samples_per_symbol must be >= 1");
    }
    const auto taps = rrc_taps(samples_per_symbol, rolloff, span_symbols);
    std::vector<cd> out((symbols.size() + span_symbols) * samples_per_symbol,
                        cd{0.0, 0.0});
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        kernels::axpy_real(out.data() + i * samples_per_symbol, symbols[i],
                           taps.data(), taps.size());
    }
    return out;
}

std::vector<cd> cdma_spread(std::span<const cd> symbols,
                            std::span<const double> code) {
    if (code.size() < 2) throw std::invalid_argument("spreading code too short");
    std::vector<cd> chips(symbols.size() * code.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        for (std::size_t k = 0; k < code.size(); ++k) {
            chips[i * code.size() + k] = symbols[i] * code[k];
        }
    }
    return chips;
}

std::vector<double> walsh_code(int row, int length) {
    if (length < 2 || !is_power_of_two(static_cast<std::size_t>(length))) {
        throw std::invalid_argument("Walsh code length must be a power of two");
    }
    if (row < 0 || row >= length) throw std::invalid_argument("Walsh row out of range");
    std::vector<double> code(length);
    for (int n = 0; n < length; ++n) {
        const int par = std::popcount(static_cast<unsigned>(row & n)) & 1;
        code[n] = par ? -1.0 : 1.0;
    }
    return code;
}

std::vector<cd> ofdm_modulate(std::span<const cd> symbols, int n_subcarriers,
                              int cp_len) {
    if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be >= 1");
    if (cp_len < 0 || cp_len >= n_subcarriers) {
        throw std::invalid_argument("cyclic prefix must be shorter than the symbol");
    }
    if (symbols.size() % static_cast<std::size_t>(n_subcarriers) != 0) {
        throw std::invalid_argument("symbol count not divisible by n_subcarriers");
    }
    const std::size_t n = static_cast<std::size_t>(n_subcarriers);
    const std::size_t blocks = symbols.size() / n;
    std::size_t loaded = 0;
    for (const cd& s : symbols) {
        if (s != cd{0.0, 0.0}) ++loaded;
    }
    std::vector<cd> out(blocks * (n + static_cast<std::size_t>(cp_len)));
    if (loaded == 0) return out;
    const double scale =
        std::sqrt(static_cast<double>(blocks) / static_cast<double>(loaded));

    FftPlan plan(n);
    std::vector<cd> buf(n);
    const std::size_t block_out = n + static_cast<std::size_t>(cp_len);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::copy_n(symbols.data() + b * n, n, buf.data());
        plan.inverse(buf.data());
        kernels::scale(buf.data(), scale, n);
        cd* dst = out.data() + b * block_out;
        std::copy_n(buf.data() + n - cp_len, cp_len, dst);
        std::copy_n(buf.data(), n, dst + cp_len);
    }
    return out;
}

void mix_to_carrier(std::span<cd> x, double carrier_hz, double fs) {
    const double dphi = 2.0 * kPi * carrier_hz / fs;
    double phi = 0.0;
    for (cd& v : x) {
        v *= cd{std::cos(phi), std::sin(phi)};
        phi += dphi;
        if (phi > kPi) phi -= 2.0 * kPi;
        if (phi < -kPi) phi += 2.0 * kPi;
    }
}

double rrc_occupied_bw_factor(double rolloff) {
    const double b = rolloff;
    const double tail = 0.005;  // 0.5% per side
    if (b <= 0.0) return 2.0 * (0.5 - tail);
    if (tail >= 0.5 * b) {
        // Quantile falls in the flat part of the raised-cosine spectrum.
        return 2.0 * (0.5 * (1.0 - b) - (tail - 0.5 * b));
    }
    // Solve (b/2) * [(1-u) - sin(pi*u)/pi] = tail for u in [0, 1].
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double u = 0.5 * (lo + hi);
        const double t = 0.5 * b * ((1.0 - u) - std::sin(kPi * u) / kPi);
        if (t > tail) {
            lo = u;
        } else {
            hi = u;
        }
    }
    const double u = 0.5 * (lo + hi);
    return 2.0 * (0.5 * (1.0 - b) + u * b);
}

double symbol_rate_for_bandwidth(double half_bw_hz, double rolloff) {
    return 2.0 * half_bw_hz / rrc_occupied_bw_factor(rolloff);
}

namespace {

std::vector<std::uint8_t> draw_bits(Rng& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = rng.bit() ? 1 : 0;
    return bits;
}

// Shapes symbols at a fractional symbol period (fs / rate samples per
// symbol) by evaluating the continuous RRC at exact offsets. Symbol i is
// centered at sample i * sps_f; leading/trailing filter tails fall outside
// the burst and are dropped.
std::vector<cd> shape_fractional(std::span<const cd> symbols, double sps_f,
                                 double rolloff, int span, int out_len) {
    std::vector<cd> out(out_len, cd{0.0, 0.0});
    const double half_span = 0.5 * span;
    const auto n_sym = static_cast<std::ptrdiff_t>(symbols.size());
    for (int n = 0; n < out_len; ++n) {
        const double t = n / sps_f;
        auto i_min = static_cast<std::ptrdiff_t>(std::ceil(t - half_span));
        auto i_max = static_cast<std::ptrdiff_t>(std::floor(t + half_span));
        i_min = std::max<std::ptrdiff_t>(i_min, 0);
        i_max = std::min(i_max, n_sym - 1);
        cd acc{0.0, 0.0};
        for (std::ptrdiff_t i = i_min; i <= i_max; ++i) {
            acc += symbols[static_cast<std::size_t>(i)] *
                   rrc_pulse(t - static_cast<double>(i), rolloff);
        }
        out[n] = acc;
    }
    return out;
}

std::size_t symbols_covering(int out_len, double sps_f) {
    return static_cast<std::size_t>(std::floor((out_len - 1) / sps_f)) + 1;
}

}  // namespace

BurstSignal synthesize_burst(const BurstParams& params, int timeslot_len,
                             double sample_rate_hz, double noise_psd_per_hz,
                             std::uint64_t data_seed, double amplitude) {
    if (timeslot_len < 1) throw std::invalid_argument("timeslot_len must be >= 1");
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("sample rate must be positive");
    if (params.half_bw_hz <= 0.0) throw std::invalid_argument("bandwidth must be positive");
    if (params.duration_frac <= 0.0 || params.duration_frac > 1.0) {
        throw std::invalid_argument("duration_frac must be in (0, 1]");
    }
    const int burst_len = static_cast<int>(
        std::floor(params.duration_frac * static_cast<double>(timeslot_len)));
    if (burst_len < 1) throw std::invalid_argument("burst is empty");

    const double fs = sample_rate_hz;
    Rng rng(data_seed);
    std::vector<cd> base;

    switch (params.scheme) {
        case ModulationScheme::Qpsk:
        case ModulationScheme::Psk8:
        case ModulationScheme::Psk16:
        case ModulationScheme::Psk32:
        case ModulationScheme::Qam16:
        case ModulationScheme::Qam32: {
            const double rate = symbol_rate_for_bandwidth(params.half_bw_hz, kRolloff);
            const double sps_f = fs / rate;
            if (sps_f < 1.0) throw std::invalid_argument("bandwidth exceeds sample rate");
            if (burst_len < sps_f) {
                throw std::invalid_argument("burst shorter than one symbol period");
            }
            const std::size_t n_sym = symbols_covering(burst_len, sps_f);
            const auto bits = draw_bits(rng, n_sym * bits_per_symbol(params.scheme));
            const auto symbols = map_bits_to_symbols(bits, params.scheme);
            base = shape_fractional(symbols, sps_f, kRolloff, kRrcSpanSymbols, burst_len);
            break;
        }
        case ModulationScheme::CdmaQpsk: {
            const double chip_rate = symbol_rate_for_bandwidth(params.half_bw_hz, kRolloff);
            const double spc_f = fs / chip_rate;
            if (spc_f < 1.0) throw std::invalid_argument("bandwidth exceeds sample rate");
            if (burst_len < spc_f * kCdmaSpreadFactor) {
                throw std::invalid_argument("burst shorter than one symbol period");
            }
            const std::size_t n_chips = symbols_covering(burst_len, spc_f);
            const std::size_t n_sym =
                (n_chips + kCdmaSpreadFactor - 1) / kCdmaSpreadFactor;
            const auto bits = draw_bits(rng, n_sym * 2);
            const auto symbols = map_bits_to_symbols(bits, ModulationScheme::CdmaQpsk);
            const auto code = walsh_code(kCdmaCodeRow, kCdmaSpreadFactor);
            auto chips = cdma_spread(symbols, code);
            // Long-code scrambling: the bare Walsh pattern repeats every
            // symbol and concentrates power at the band edges; a +/-1 chip
            // overlay whitens it so the occupied band matches QPSK shaping.
            for (auto& c : chips) {
                if (rng.bit()) c = -c;
            }
            base = shape_fractional(chips, spc_f, kRolloff, kRrcSpanSymbols, burst_len);
            break;
        }
        case ModulationScheme::OfdmQpsk: {
            const double occupied = 2.0 * params.half_bw_hz;
            const double f_ofdm =
                occupied * kOfdmSubcarriers / static_cast<double>(kOfdmLoaded);
            auto n_fft = static_cast<int>(std::llround(kOfdmSubcarriers * fs / f_ofdm));
            n_fft = std::max(n_fft, kOfdmSubcarriers);
            const int cp = static_cast<int>(
                std::llround(static_cast<double>(n_fft) / kOfdmCpFraction));
            const int block = n_fft + cp;
            if (burst_len < block) {
                throw std::invalid_argument("burst shorter than one OFDM symbol");
            }
            const int n_blocks = (burst_len + block - 1) / block;
            std::vector<cd> freq(static_cast<std::size_t>(n_blocks) * n_fft,
                                 cd{0.0, 0.0});
            const int half = kOfdmLoaded / 2;  // +/-1..26
            for (int b = 0; b < n_blocks; ++b) {
                const auto bits = draw_bits(rng, static_cast<std::size_t>(kOfdmLoaded) * 2);
                const auto symbols = map_bits_to_symbols(bits, ModulationScheme::OfdmQpsk);
                cd* blk = freq.data() + static_cast<std::size_t>(b) * n_fft;
                for (int k = 0; k < half; ++k) blk[k + 1] = symbols[k];
                for (int k = 0; k < half; ++k) {
                    blk[n_fft - half + k] = symbols[half + k];
                }
            }
            auto shaped = ofdm_modulate(freq, n_fft, cp);
            shaped.resize(burst_len);
            base = std::move(shaped);
            break;
        }
    }

    mix_to_carrier(base, params.carrier_hz, fs);

    const double power =
        kernels::sum_abs_squared(base.data(), base.size()) / base.size();
    if (power <= 0.0) throw std::invalid_argument("degenerate burst power");
    const double snr_lin = std::pow(10.0, params.snr_db / 10.0);
    const double target = snr_lin * noise_psd_per_hz * 2.0 * params.half_bw_hz;
    kernels::scale(base.data(), std::sqrt(target / power), base.size());
    if (amplitude != 1.0) {
        kernels::scale(base.data(), amplitude, base.size());
    }

    BurstSignal out;
    out.samples = std::move(base);
    out.mean_power = target * amplitude * amplitude;
    return out;
}

}  // namespace rfscene
