#include "rfscene/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rfscene {

double iou(const Box& a, const Box& b) {
    const double ax1 = a.cx - 0.5 * a.w, ax2 = a.cx + 0.5 * a.w;
    const double ay1 = a.cy - 0.5 * a.h, ay2 = a.cy + 0.5 * a.h;
    const double bx1 = b.cx - 0.5 * b.w, bx2 = b.cx + 0.5 * b.w;
    const double by1 = b.cy - 0.5 * b.h, by2 = b.cy + 0.5 * b.h;
    const double ix = std::max(0.0, std::min(ax2, bx2) - std::max(ax1, bx1));
    const double iy = std::max(0.0, std::min(ay2, by2) - std::max(ay1, by1));
    const double inter = ix * iy;
    const double area_a = std::max(0.0, a.w) * std::max(0.0, a.h);
    const double area_b = std::max(0.0, b.w) * std::max(0.0, b.h);
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

namespace {

// Mean box filter over the power matrix, edges clamped to the valid region.
std::vector<double> smooth_power(const std::vector<double>& p, int n_frames,
                                 int n_bins, int half_t, int half_f) {
    if (half_t == 0 && half_f == 0) return p;
    std::vector<double> out(p.size());
    // Running-sum over time first, then frequency.
    std::vector<double> tmp(p.size());
    for (int k = 0; k < n_bins; ++k) {
        for (int m = 0; m < n_frames; ++m) {
            const int m0 = std::max(0, m - half_t);
            const int m1 = std::min(n_frames - 1, m + half_t);
            double acc = 0.0;
            for (int j = m0; j <= m1; ++j) acc += p[static_cast<std::size_t>(j) * n_bins + k];
            tmp[static_cast<std::size_t>(m) * n_bins + k] = acc / (m1 - m0 + 1);
        }
    }
    for (int m = 0; m < n_frames; ++m) {
        for (int k = 0; k < n_bins; ++k) {
            const int k0 = std::max(0, k - half_f);
            const int k1 = std::min(n_bins - 1, k + half_f);
            double acc = 0.0;
            for (int j = k0; j <= k1; ++j) acc += tmp[static_cast<std::size_t>(m) * n_bins + j];
            out[static_cast<std::size_t>(m) * n_bins + k] = acc / (k1 - k0 + 1);
        }
    }
    return out;
}

}  // namespace

std::vector<Detection> detect_energy(const Spectrogram& sg,
                                     const DetectorConfig& cfg) {
    if (!(cfg.threshold_db > sg.floor_db && cfg.threshold_db < 0.0)) {
        throw std::invalid_argument("threshold_db must lie in (floor_db, 0)");
    }
    const auto n_frames = static_cast<int>(sg.n_frames);
    const auto n_bins = static_cast<int>(sg.n_bins);
    const std::size_t cells = sg.db.size();

    std::vector<double> power(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        power[i] = std::pow(10.0, sg.db[i] / 10.0);
    }
    power = smooth_power(power, n_frames, n_bins, cfg.smooth_frames / 2,
                         cfg.smooth_bins / 2);

    const double peak = *std::max_element(power.begin(), power.end());
    std::vector<double> sdb(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        sdb[i] = power[i] > 0.0 ? 10.0 * std::log10(power[i] / peak) : sg.floor_db;
    }

    // Robust floor guard: never threshold below the median cell plus margin.
    std::vector<double> sorted(sdb);
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double threshold = std::max(cfg.threshold_db, median + cfg.noise_margin_db);

    std::vector<std::uint8_t> hot(cells);
    for (std::size_t i = 0; i < cells; ++i) hot[i] = sdb[i] >= threshold ? 1 : 0;

    // 8-connected component labeling over the (frame, bin) grid.
    std::vector<Detection> out;
    std::vector<std::uint8_t> visited(cells, 0);
    std::vector<std::size_t> stack;
    const double hop = sg.config.hop();
    const double total_samples = static_cast<double>(sg.n_samples);
    for (std::size_t seed = 0; seed < cells; ++seed) {
        if (!hot[seed] || visited[seed]) continue;
        stack.assign(1, seed);
        visited[seed] = 1;
        int m_min = n_frames, m_max = -1, k_min = n_bins, k_max = -1;
        double excess_sum = 0.0;
        std::size_t area = 0;
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            const int m = static_cast<int>(cur / n_bins);
            const int k = static_cast<int>(cur % n_bins);
            ++area;
            excess_sum += sdb[cur] - threshold;
            m_min = std::min(m_min, m);
            m_max = std::max(m_max, m);
            k_min = std::min(k_min, k);
            k_max = std::max(k_max, k);
            for (int dm = -1; dm <= 1; ++dm) {
                for (int dk = -1; dk <= 1; ++dk) {
                    if (dm == 0 && dk == 0) continue;
                    const int nm = m + dm;
                    const int nk = k + dk;
                    if (nm < 0 || nm >= n_frames || nk < 0 || nk >= n_bins) continue;
                    const std::size_t ni =
                        static_cast<std::size_t>(nm) * n_bins + nk;
                    if (hot[ni] && !visited[ni]) {
                        visited[ni] = 1;
                        stack.push_back(ni);
                    }
                }
            }
        }
        if (area < static_cast<std::size_t>(cfg.min_area)) continue;

        Detection d;
        d.class_id = 0;  // baseline is class-agnostic
        const double x1 = std::clamp(m_min * hop / total_samples, 0.0, 1.0);
        const double x2 = std::clamp((m_max * hop + sg.config.window_len) /
                                         total_samples, 0.0, 1.0);
        const double y1 = std::clamp(1.0 - static_cast<double>(k_max + 1) / n_bins, 0.0, 1.0);
        const double y2 = std::clamp(1.0 - static_cast<double>(k_min) / n_bins, 0.0, 1.0);
        d.box = {0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1};
        const double mean_excess = excess_sum / static_cast<double>(area);
        d.score = std::clamp(mean_excess / -threshold, 0.0, 1.0);
        out.push_back(d);
    }
    return out;
}

std::vector<Detection> detect_energy(const Spectrogram& sg, double threshold_db,
                                     int min_area) {
    DetectorConfig cfg;
    cfg.threshold_db = threshold_db;
    cfg.min_area = min_area;
    return detect_energy(sg, cfg);
}

namespace {

double ap_101(std::vector<double> recalls, std::vector<double> precisions) {
    if (recalls.empty()) return 0.0;
    // Precision envelope: max precision at recall >= r.
    for (std::size_t i = precisions.size() - 1; i-- > 0;) {
        precisions[i] = std::max(precisions[i], precisions[i + 1]);
    }
    double acc = 0.0;
    std::size_t idx = 0;
    for (int g = 0; g <= 100; ++g) {
        const double r = g / 100.0;
        while (idx < recalls.size() && recalls[idx] < r) ++idx;
        if (idx < recalls.size()) acc += precisions[idx];
    }
    return acc / 101.0;
}

}  // namespace

MapReport map_scores(std::span<const std::vector<Detection>> detections,
                     std::span<const std::vector<Annotation>> ground_truth) {
    if (detections.size() != ground_truth.size()) {
        throw std::invalid_argument("detection and ground-truth image counts differ");
    }
    std::size_t total_gt = 0;
    std::set<int> classes;
    for (const auto& img : ground_truth) {
        total_gt += img.size();
        for (const auto& g : img) classes.insert(g.class_id);
    }
    if (total_gt == 0) {
        throw std::invalid_argument("ground truth is empty");
    }

    MapReport report;
    for (int i = 0; i < 10; ++i) {
        report.iou_thresholds.push_back((50 + 5 * i) / 100.0);
    }

    struct Det {
        std::size_t image;
        double score;
        Box box;
    };

    for (int cls : classes) {
        // Gather per-class detections (stable order under score ties).
        std::vector<Det> dets;
        std::size_t n_gt = 0;
        for (std::size_t img = 0; img < detections.size(); ++img) {
            for (const auto& d : detections[img]) {
                if (d.class_id == cls) dets.push_back({img, d.score, d.box});
            }
            for (const auto& g : ground_truth[img]) {
                if (g.class_id == cls) ++n_gt;
            }
        }
        std::stable_sort(dets.begin(), dets.end(),
                         [](const Det& a, const Det& b) { return a.score > b.score; });

        std::vector<double> ap_per_thr;
        for (double thr : report.iou_thresholds) {
            std::vector<std::vector<bool>> used(ground_truth.size());
            for (std::size_t img = 0; img < ground_truth.size(); ++img) {
                used[img].assign(ground_truth[img].size(), false);
            }
            std::vector<double> recalls, precisions;
            std::size_t tp = 0, fp = 0;
            for (const Det& d : dets) {
                const auto& gts = ground_truth[d.image];
                double best = 0.0;
                std::size_t best_idx = gts.size();
                for (std::size_t j = 0; j < gts.size(); ++j) {
                    if (gts[j].class_id != cls || used[d.image][j]) continue;
                    const double v = iou(d.box, box_of(gts[j]));
                    if (v > best) {
                        best = v;
                        best_idx = j;
                    }
                }
                if (best_idx < gts.size() && best >= thr) {
                    used[d.image][best_idx] = true;
                    ++tp;
                } else {
                    ++fp;
                }
                recalls.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
                precisions.push_back(static_cast<double>(tp) /
                                     static_cast<double>(tp + fp));
            }
            ap_per_thr.push_back(ap_101(std::move(recalls), std::move(precisions)));
        }
        report.per_class_ap[cls] = std::move(ap_per_thr);
    }

    report.map_per_threshold.assign(report.iou_thresholds.size(), 0.0);
    for (const auto& [cls, aps] : report.per_class_ap) {
        for (std::size_t i = 0; i < aps.size(); ++i) {
            report.map_per_threshold[i] += aps[i];
        }
    }
    for (double& v : report.map_per_threshold) {
        v /= static_cast<double>(report.per_class_ap.size());
    }
    report.map50 = report.map_per_threshold.front();
    report.map50_95 =
        std::accumulate(report.map_per_threshold.begin(),
                        report.map_per_threshold.end(), 0.0) /
        static_cast<double>(report.map_per_threshold.size());
    return report;
}

std::vector<std::vector<Detection>> collapse_classes(
    std::span<const std::vector<Detection>> detections) {
    std::vector<std::vector<Detection>> out(detections.begin(), detections.end());
    for (auto& img : out) {
        for (auto& d : img) d.class_id = 0;
    }
    return out;
}

std::vector<std::vector<Annotation>> collapse_classes(
    std::span<const std::vector<Annotation>> ground_truth) {
    std::vector<std::vector<Annotation>> out(ground_truth.begin(),
                                             ground_truth.end());
    for (auto& img : out) {
        for (auto& g : img) g.class_id = 0;
    }
    return out;
}

std::vector<Detection> read_predictions(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::vector<Detection> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Detection d;
        if (!(ss >> d.class_id >> d.box.cx >> d.box.cy >> d.box.w >> d.box.h)) {
            throw std::runtime_error("malformed prediction line in " + path.string());
        }
        if (!(ss >> d.score)) d.score = 1.0;
        out.push_back(d);
    }
    return out;
}

}  // namespace rfscene
