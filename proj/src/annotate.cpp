#include "rfscene/annotate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rfscene {

Annotation burst_to_bbox(const EmitterBurst& burst, const SceneConfig& scene) {
    const double total = scene.total_samples();
    const double fs = scene.sample_rate_hz;
    const double len = burst.length_samples;
    if (len <= 0.0) throw std::invalid_argument("zero-length burst");

    const double start = burst.start_sample(scene);
    double x1 = start / total;
    double x2 = (start + len) / total;
    const double f_lo = burst.burst.carrier_hz - burst.burst.half_bw_hz;
    const double f_hi = burst.burst.carrier_hz + burst.burst.half_bw_hz;
    // top-origin y: higher frequency -> smaller y
    double y1 = 1.0 - f_hi / fs;
    double y2 = 1.0 - f_lo / fs;

    x1 = std::clamp(x1, 0.0, 1.0);
    x2 = std::clamp(x2, 0.0, 1.0);
    y1 = std::clamp(y1, 0.0, 1.0);
    y2 = std::clamp(y2, 0.0, 1.0);
    if (x2 <= x1 || y2 <= y1) {
        throw std::invalid_argument("burst box degenerates after clipping");
    }

    Annotation a;
    a.class_id = burst.class_id;
    a.cx = 0.5 * (x1 + x2);
    a.cy = 0.5 * (y1 + y2);
    a.w = x2 - x1;
    a.h = y2 - y1;
    return a;
}

std::vector<Annotation> annotate_scene(std::span<const EmitterBurst> bursts,
                                       const SceneConfig& scene) {
    std::vector<Annotation> out;
    out.reserve(bursts.size());
    for (const EmitterBurst& b : bursts) out.push_back(burst_to_bbox(b, scene));
    return out;
}

void write_labels(std::span<const Annotation> annotations,
                  const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    char line[128];
    for (const Annotation& a : annotations) {
        const int n = std::snprintf(line, sizeof(line), "%d %.6f %.6f %.6f %.6f\n",
                                    a.class_id, a.cx, a.cy, a.w, a.h);
        f.write(line, n);
    }
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Annotation> read_labels(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::vector<Annotation> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Annotation a;
        if (!(ss >> a.class_id >> a.cx >> a.cy >> a.w >> a.h)) {
            throw std::runtime_error("malformed label line in " + path.string());
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace rfscene
