#include "rfscene/charmetrics.hpp"

#include <cmath>
#include <stdexcept>

namespace rfscene {

int sqrt_pow2(long n) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    const double target = 0.5 * std::log2(static_cast<double>(n));
    const long exp = std::lround(target);
    return static_cast<int>(1L << exp);
}

Characterization characterize(const SceneConfig& cfg) {
    cfg.validate();
    Characterization c;
    c.bw_sample = cfg.sample_rate_hz;
    c.bw_min_double_sided = 2.0 * cfg.half_bw_hz.lo;
    c.dt_min = cfg.duration_frac.lo;
    c.n_timeslots = cfg.n_timeslots;
    c.n_samples = static_cast<long>(cfg.total_samples());

    if (c.bw_sample <= 0.0) throw std::invalid_argument("zero sampling bandwidth");
    c.r_f = c.bw_min_double_sided / c.bw_sample;
    c.r_t = c.dt_min / static_cast<double>(c.n_timeslots);
    c.skewness = c.r_t / c.r_f;
    c.w_opt = sqrt_pow2(c.n_samples);
    return c;
}

}  // namespace rfscene
