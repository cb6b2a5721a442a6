#include "rfscene/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rfscene/kernels.hpp"
#include "rfscene/rng.hpp"

namespace rfscene {

namespace {

void check_range(const ParamRange& r, const char* what) {
    if (!(r.lo <= r.hi)) {
        throw std::invalid_argument(std::string("empty range for ") + what);
    }
}

}  // namespace

void SceneConfig::validate() const {
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("sample rate must be positive");
    if (timeslot_len < 1) throw std::invalid_argument("timeslot_len must be >= 1");
    if (n_timeslots < 1) throw std::invalid_argument("n_timeslots must be >= 1");
    check_range(carrier_hz, "carrier_hz");
    check_range(half_bw_hz, "half_bw_hz");
    check_range(duration_frac, "duration_frac");
    check_range(snr_db, "snr_db");
    if (half_bw_hz.lo <= 0.0) throw std::invalid_argument("half_bw_hz must be positive");
    if (duration_frac.lo <= 0.0 || duration_frac.hi > 1.0) {
        throw std::invalid_argument("duration_frac range must lie in (0, 1]");
    }
    if (emitters_min < 0 || emitters_max < emitters_min) {
        throw std::invalid_argument("invalid emitter count range");
    }
}

SceneSpec sample_scenario(const SceneConfig& config, int scene_index) {
    config.validate();

    SceneSpec spec;
    spec.config = config;
    spec.scene_index = scene_index;
    spec.scene_seed = mix_seed({config.master_seed,
                                static_cast<std::uint64_t>(scene_index)});

    Rng rng(mix_seed({spec.scene_seed, kStreamScene}));
    int burst_counter = 0;
    for (int slot = 0; slot < config.n_timeslots; ++slot) {
        const int count = static_cast<int>(
            rng.uniform_int(config.emitters_min, config.emitters_max));
        for (int e = 0; e < count; ++e) {
            EmitterBurst eb;
            eb.timeslot_index = slot;
            eb.burst.scheme = scheme_from_id(static_cast<int>(rng.uniform_int(0, kNumSchemes - 1)));
            eb.class_id = static_cast<int>(eb.burst.scheme);
            eb.burst.carrier_hz = rng.uniform(config.carrier_hz.lo, config.carrier_hz.hi);
            eb.burst.half_bw_hz = rng.uniform(config.half_bw_hz.lo, config.half_bw_hz.hi);
            eb.burst.duration_frac =
                rng.uniform(config.duration_frac.lo, config.duration_frac.hi);
            eb.burst.snr_db = rng.uniform(config.snr_db.lo, config.snr_db.hi);
            eb.length_samples = static_cast<int>(
                std::floor(eb.burst.duration_frac * config.timeslot_len));
            const int max_offset = config.timeslot_len - eb.length_samples;
            eb.burst.start_offset =
                max_offset > 0 ? static_cast<int>(rng.uniform_int(0, max_offset)) : 0;
            eb.data_seed = mix_seed({spec.scene_seed, kStreamData,
                                     static_cast<std::uint64_t>(burst_counter)});
            ++burst_counter;
            spec.bursts.push_back(eb);
        }
    }
    return spec;
}

std::pair<IqBuffer, std::vector<EmitterBurst>> render_scene(const SceneSpec& spec) {
    const SceneConfig& cfg = spec.config;
    cfg.validate();
    const int total = cfg.total_samples();

    IqBuffer buf;
    buf.sample_rate_hz = cfg.sample_rate_hz;
    buf.samples.resize(total);

    Rng noise(mix_seed({spec.scene_seed, kStreamNoise}));
    for (cd& v : buf.samples) v = noise.complex_gaussian(kNoisePowerPerSample);

    const double noise_psd = kNoisePowerPerSample / cfg.sample_rate_hz;
    for (const EmitterBurst& eb : spec.bursts) {
        const int start = eb.start_sample(cfg);
        BurstSignal sig = synthesize_burst(eb.burst, cfg.timeslot_len,
                                           cfg.sample_rate_hz, noise_psd,
                                           eb.data_seed);
        if (start < 0 ||
            start + static_cast<int>(sig.samples.size()) > total ||
            eb.burst.start_offset + static_cast<int>(sig.samples.size()) >
                cfg.timeslot_len) {
            throw std::invalid_argument("burst does not fit inside its timeslot");
        }
        kernels::accumulate(buf.samples.data() + start, sig.samples.data(),
                            sig.samples.size());
    }
    return {std::move(buf), spec.bursts};
}

}  // namespace rfscene
