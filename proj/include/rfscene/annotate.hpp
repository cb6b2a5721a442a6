#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "rfscene/scenario.hpp"

namespace rfscene {

// Normalized detection-style box over the spectrogram image plane.
// y follows top-origin image coordinates with frequency increasing upward,
// so cy = 1 - f/fs.
struct Annotation {
    int class_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

Annotation burst_to_bbox(const EmitterBurst& burst, const SceneConfig& scene);

std::vector<Annotation> annotate_scene(std::span<const EmitterBurst> bursts,
                                       const SceneConfig& scene);

// One line per annotation: "class_id cx cy w h", 6 decimal places.
void write_labels(std::span<const Annotation> annotations,
                  const std::filesystem::path& path);

std::vector<Annotation> read_labels(const std::filesystem::path& path);

}  // namespace rfscene
