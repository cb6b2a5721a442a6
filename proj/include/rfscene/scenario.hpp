#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rfscene/waveform.hpp"

namespace rfscene {

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Scene sampling configuration; defaults follow the simulation setup used
// throughout the project (500 MHz complex band, 4 x 4096-sample timeslots).
struct SceneConfig {
    double sample_rate_hz = 500e6;
    int timeslot_len = 4096;
    int n_timeslots = 4;
    ParamRange carrier_hz{100e6, 400e6};
    ParamRange half_bw_hz{20e6, 100e6};
    ParamRange duration_frac{0.2, 1.0};
    ParamRange snr_db{0.0, 25.0};
    int emitters_min = 1;
    int emitters_max = 8;
    std::uint64_t master_seed = 0;

    int total_samples() const { return timeslot_len * n_timeslots; }
    void validate() const;
};

struct EmitterBurst {
    BurstParams burst;
    int timeslot_index = 0;
    int class_id = 0;
    std::uint64_t data_seed = 0;
    int length_samples = 0;  // floor(duration_frac * timeslot_len)

    int start_sample(const SceneConfig& cfg) const {
        return timeslot_index * cfg.timeslot_len + burst.start_offset;
    }
};

struct SceneSpec {
    SceneConfig config;
    std::vector<EmitterBurst> bursts;
    std::uint64_t scene_seed = 0;
    int scene_index = 0;
};

// Draws a scene specification: per timeslot an independent uniform emitter
// count, each burst with parameters uniform over the configured ranges.
// Fully determined by (config.master_seed, scene_index).
SceneSpec sample_scenario(const SceneConfig& config, int scene_index);

// Renders the composite scene: unit-power complex AWGN plus every burst at
// its slot offset. Ground truth is passed through unchanged.
std::pair<IqBuffer, std::vector<EmitterBurst>> render_scene(const SceneSpec& spec);

// Per-sample AWGN power of rendered scenes (the SNR reference).
constexpr double kNoisePowerPerSample = 1.0;

}  // namespace rfscene
