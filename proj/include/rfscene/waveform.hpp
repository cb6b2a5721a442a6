#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rfscene {

using cd = std::complex<double>;

// Class ids are the listing order and are stable across the project.
enum class ModulationScheme : int {
    Qpsk = 0,
    Psk8 = 1,
    Psk16 = 2,
    Psk32 = 3,
    Qam16 = 4,
    Qam32 = 5,
    CdmaQpsk = 6,
    OfdmQpsk = 7,
};

constexpr int kNumSchemes = 8;

std::string_view scheme_name(ModulationScheme s);
ModulationScheme scheme_from_id(int id);
int bits_per_symbol(ModulationScheme s);

struct BurstParams {
    ModulationScheme scheme = ModulationScheme::Qpsk;
    double carrier_hz = 250e6;
    double half_bw_hz = 50e6;     // single-sided; occupied band is twice this
    double duration_frac = 1.0;   // fraction of one timeslot
    double snr_db = 10.0;         // in-band SNR
    int start_offset = 0;         // sample index within the timeslot
};

struct IqBuffer {
    std::vector<cd> samples;
    double sample_rate_hz = 0.0;
};

// Gray-coded unit-average-power constellation for the scheme (CDMA/OFDM map
// to QPSK points). Indexed by the bit-group value, MSB first.
const std::vector<cd>& constellation(ModulationScheme s);

// bits.size() must be divisible by bits_per_symbol(s).
std::vector<cd> map_bits_to_symbols(std::span<const std::uint8_t> bits,
                                    ModulationScheme s);

// Root-raised-cosine impulse response at continuous time t (symbol units).
double rrc_pulse(double t, double rolloff);

// Unit-energy discrete RRC taps, length span*sps + 1.
std::vector<double> rrc_taps(int sps, double rolloff, int span);

// Symbol impulse train convolved with the RRC filter.
// Output length = (symbols + span) * sps.
std::vector<cd> pulse_shape(std::span<const cd> symbols, int samples_per_symbol,
                            double rolloff, int span_symbols);

// out[i*L + k] = symbols[i] * code[k]; code entries are +/-1.
std::vector<cd> cdma_spread(std::span<const cd> symbols,
                            std::span<const double> code);

// Row `row` of the naturally ordered Walsh-Hadamard matrix of size `length`.
std::vector<double> walsh_code(int row, int length);

// Each block of n_subcarriers frequency-domain symbols becomes one OFDM
// symbol via an inverse DFT, prefixed by its last cp_len samples. Per-sample
// average power is normalized to 1 for unit-power loaded symbols.
std::vector<cd> ofdm_modulate(std::span<const cd> symbols, int n_subcarriers,
                              int cp_len);

// In-place multiplication by exp(j*2*pi*carrier_hz*n/fs), n from 0.
void mix_to_carrier(std::span<cd> x, double carrier_hz, double fs);

// RRC rolloff and span used for all single-carrier and chip shaping.
constexpr double kRolloff = 0.25;
constexpr int kRrcSpanSymbols = 8;
constexpr int kCdmaSpreadFactor = 8;
constexpr int kCdmaCodeRow = 5;
constexpr int kOfdmSubcarriers = 64;
constexpr int kOfdmLoaded = 52;   // +/-1..26, DC and band edges null
constexpr int kOfdmCpFraction = 4;  // cyclic prefix = n/4 (16 of 64)

// Width of the band holding 99% of the power of an RRC-shaped signal, in
// units of the symbol rate. Symbol rates are derived from this factor so a
// burst's measured 99%-power bandwidth lands on the configured value.
double rrc_occupied_bw_factor(double rolloff);

// Symbol (or chip) rate whose shaped 99%-power bandwidth is 2*half_bw_hz.
double symbol_rate_for_bandwidth(double half_bw_hz, double rolloff);

struct BurstSignal {
    std::vector<cd> samples;  // length = floor(duration_frac * timeslot_len)
    double mean_power = 0.0;  // after SNR scaling
};

// Renders one modulated burst at the scene sample rate, mixed to its carrier
// and scaled so in-band SNR against noise_psd_per_hz matches params.snr_db.
// Payload bits are drawn from data_seed. `amplitude` applies a final exact
// per-sample multiply.
BurstSignal synthesize_burst(const BurstParams& params, int timeslot_len,
                             double sample_rate_hz, double noise_psd_per_hz,
                             std::uint64_t data_seed, double amplitude = 1.0);

}  // namespace rfscene
