#pragma once

#include "rfscene/scenario.hpp"

namespace rfscene {

// Dataset characterization ratios derived from a scene configuration.
struct Characterization {
    double r_f = 0.0;       // min double-sided bandwidth / sampling bandwidth
    double r_t = 0.0;       // min active duration / total duration
    double skewness = 0.0;  // r_t / r_f
    int w_opt = 0;          // sqrt(total samples), nearest power of two

    // input snapshot
    double bw_min_double_sided = 0.0;
    double bw_sample = 0.0;
    double dt_min = 0.0;
    int n_timeslots = 0;
    long n_samples = 0;
};

Characterization characterize(const SceneConfig& cfg);

// Nearest power of two to sqrt(n), ties resolved upward in log space.
int sqrt_pow2(long n);

}  // namespace rfscene
