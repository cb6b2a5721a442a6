#pragma once

#include <map>
#include <span>
#include <vector>

#include "rfscene/annotate.hpp"
#include "rfscene/stft.hpp"

namespace rfscene {

struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

inline Box box_of(const Annotation& a) { return {a.cx, a.cy, a.w, a.h}; }

// Intersection over union; 0 for disjoint or zero-area boxes.
double iou(const Box& a, const Box& b);

struct Detection {
    int class_id = 0;
    Box box;
    double score = 0.0;
};

// Baseline energy detector over a dB spectrogram. Power is multi-look
// averaged (box filter) before thresholding; the threshold is peak-relative
// but never drops below the median cell plus noise_margin_db, so empty
// scenes produce no components. Defaults frozen from the Monte-Carlo
// false-alarm / single-burst calibration (0/100 noise-only detections,
// 100/100 clean single-burst detections at 25 dB).
struct DetectorConfig {
    double threshold_db = -10.0;
    int min_area = 24;
    int smooth_frames = 3;
    int smooth_bins = 3;
    double noise_margin_db = 7.0;
};

std::vector<Detection> detect_energy(const Spectrogram& sg,
                                     const DetectorConfig& cfg = {});
std::vector<Detection> detect_energy(const Spectrogram& sg, double threshold_db,
                                     int min_area);

struct MapReport {
    std::vector<double> iou_thresholds;             // 0.50, 0.55, ..., 0.95
    std::map<int, std::vector<double>> per_class_ap;  // class -> AP per threshold
    std::vector<double> map_per_threshold;
    double map50 = 0.0;
    double map50_95 = 0.0;
};

// COCO-style evaluation: greedy matching by descending score against the
// highest-IoU unmatched ground truth, 101-point interpolated AP, averaged
// over the classes present in the ground truth.
MapReport map_scores(std::span<const std::vector<Detection>> detections,
                     std::span<const std::vector<Annotation>> ground_truth);

// Collapse all class ids to 0 (class-agnostic scoring of the baseline).
std::vector<std::vector<Detection>> collapse_classes(
    std::span<const std::vector<Detection>> detections);
std::vector<std::vector<Annotation>> collapse_classes(
    std::span<const std::vector<Annotation>> ground_truth);

// Label-file format with an optional trailing confidence column
// ("class cx cy w h [score]"); missing scores default to 1.
std::vector<Detection> read_predictions(const std::filesystem::path& path);

}  // namespace rfscene
