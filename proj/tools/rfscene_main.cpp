// rfscene: synthesize congested-spectrum detection datasets, enumerate STFT
// parameter sweeps, characterize configurations, and score detections.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rfscene/charmetrics.hpp"
#include "rfscene/dataset.hpp"
#include "rfscene/eval.hpp"
#include "rfscene/image.hpp"

namespace fs = std::filesystem;
using namespace rfscene;
using ordered_json = nlohmann::ordered_json;

namespace {

StftConfig parse_stft(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) {
        throw CLI::ValidationError("--stft", "expected W,F,window,overlap");
    }
    StftConfig cfg;
    cfg.window_len = std::stoi(parts[0]);
    cfg.fft_size = std::stoi(parts[1]);
    cfg.window = window_from_name(parts[2]);
    cfg.overlap = std::stod(parts[3]);
    cfg.validate();
    return cfg;
}

SplitCounts parse_split(const std::string& text) {
    SplitCounts split;
    if (std::sscanf(text.c_str(), "%d,%d,%d", &split.train, &split.val,
                    &split.test) != 3) {
        throw CLI::ValidationError("--split", "expected train,val,test");
    }
    return split;
}

struct SceneOptions {
    std::pair<double, double> carrier{100e6, 400e6};
    std::pair<double, double> half_bw{20e6, 100e6};
    std::pair<double, double> duration{0.2, 1.0};
    std::pair<double, double> snr{0.0, 25.0};
    std::pair<int, int> emitters{1, 8};
    SceneConfig base;

    SceneConfig resolve(std::uint64_t seed) const {
        SceneConfig cfg = base;
        cfg.carrier_hz = {carrier.first, carrier.second};
        cfg.half_bw_hz = {half_bw.first, half_bw.second};
        cfg.duration_frac = {duration.first, duration.second};
        cfg.snr_db = {snr.first, snr.second};
        cfg.emitters_min = emitters.first;
        cfg.emitters_max = emitters.second;
        cfg.master_seed = seed;
        cfg.validate();
        return cfg;
    }
};

void add_scene_options(CLI::App* cmd, SceneOptions& opt) {
    cmd->add_option("--sample-rate", opt.base.sample_rate_hz,
                    "Complex sample rate in Hz")
        ->capture_default_str();
    cmd->add_option("--timeslot-len", opt.base.timeslot_len,
                    "Samples per timeslot")
        ->capture_default_str();
    cmd->add_option("--timeslots", opt.base.n_timeslots, "Timeslots per scene")
        ->capture_default_str();
    cmd->add_option("--carrier", opt.carrier, "Carrier range in Hz (lo hi)");
    cmd->add_option("--half-bw", opt.half_bw,
                    "Single-sided bandwidth range in Hz (lo hi)");
    cmd->add_option("--duration", opt.duration,
                    "Duration range as a timeslot fraction (lo hi)");
    cmd->add_option("--snr", opt.snr, "Per-burst SNR range in dB (lo hi)");
    cmd->add_option("--emitters", opt.emitters,
                    "Emitters per timeslot (min max)");
}

void print_table_row(const char* name, double v50, double v5095) {
    std::printf("%-16s %8.4f %10.4f\n", name, v50, v5095);
}

ordered_json report_json(const MapReport& r) {
    ordered_json j;
    j["map50"] = r.map50;
    j["map50_95"] = r.map50_95;
    j["iou_thresholds"] = r.iou_thresholds;
    j["map_per_threshold"] = r.map_per_threshold;
    ordered_json per_class = ordered_json::object();
    for (const auto& [cls, aps] : r.per_class_ap) {
        per_class[std::to_string(cls)] = aps;
    }
    j["per_class_ap"] = std::move(per_class);
    return j;
}

int run_generate(const SceneOptions& scene, std::uint64_t seed, int n_scenes,
                 const std::string& split_text, const std::string& stft_text,
                 double floor_db, int image_size, const std::string& out_dir,
                 int jobs) {
    DatasetOptions opt;
    opt.scene = scene.resolve(seed);
    opt.stft = parse_stft(stft_text);
    opt.n_scenes = n_scenes;
    opt.split = parse_split(split_text);
    opt.floor_db = floor_db;
    opt.image_height = image_size;
    opt.image_width = image_size;
    opt.jobs = jobs;
    const auto manifest = build_dataset(opt, out_dir);
    std::fprintf(stderr, "wrote %zu image/label pairs under %s\n",
                 manifest.items.size(), out_dir.c_str());
    return 0;
}

std::vector<Detection> baseline_detections(const DatasetManifest& manifest,
                                           int index) {
    const auto spec = sample_scenario(manifest.options.scene, index);
    auto [iq, bursts] = render_scene(spec);
    const auto sg =
        spectrogram(iq, manifest.options.stft, manifest.options.floor_db);
    return detect_energy(sg);
}

int run_evaluate(const std::string& dataset_dir, const std::string& pred_dir,
                 bool baseline, std::string report_path) {
    const auto manifest = read_manifest(fs::path(dataset_dir) / "manifest.json");
    std::vector<std::vector<Annotation>> gt;
    std::vector<std::vector<Detection>> det;
    gt.reserve(manifest.items.size());
    for (const auto& item : manifest.items) {
        gt.push_back(read_labels(fs::path(dataset_dir) / item.label));
        if (baseline) {
            det.push_back(baseline_detections(manifest, item.index));
        } else {
            const std::string base = scene_basename(item.index) + ".txt";
            fs::path pred = fs::path(pred_dir) / base;
            if (!fs::exists(pred)) pred = fs::path(pred_dir) / item.split / base;
            det.push_back(fs::exists(pred) ? read_predictions(pred)
                                           : std::vector<Detection>{});
        }
    }

    ordered_json out;
    out["dataset"] = dataset_dir;
    out["predictions"] = baseline ? std::string("<baseline energy detector>")
                                  : pred_dir;
    std::printf("%-16s %8s %10s\n", "metric path", "mAP50", "mAP50-95");
    if (!baseline) {
        const auto class_aware = map_scores(det, gt);
        out["class_aware"] = report_json(class_aware);
        print_table_row("class-aware", class_aware.map50, class_aware.map50_95);
    }
    const auto agnostic_det = collapse_classes(det);
    const auto agnostic_gt = collapse_classes(gt);
    const auto agnostic = map_scores(agnostic_det, agnostic_gt);
    out["class_agnostic"] = report_json(agnostic);
    print_table_row("class-agnostic", agnostic.map50, agnostic.map50_95);

    if (report_path.empty()) {
        report_path = (fs::path(baseline ? dataset_dir : pred_dir) /
                       "map_report.json")
                          .string();
    }
    std::ofstream f(report_path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write report: " + report_path);
    f << out.dump(2) << '\n';
    std::fprintf(stderr, "report written to %s\n", report_path.c_str());
    return 0;
}

int run_preview(const SceneOptions& scene, std::uint64_t seed, int scene_index,
                const std::string& stft_text, double floor_db, int image_size,
                const std::string& out_file) {
    const auto cfg = scene.resolve(seed);
    const auto stft_cfg = parse_stft(stft_text);
    const auto spec = sample_scenario(cfg, scene_index);
    auto [iq, bursts] = render_scene(spec);
    const auto sg = spectrogram(iq, stft_cfg, floor_db);
    auto img = render_image(sg, image_size, image_size);
    for (const auto& eb : bursts) {
        const auto a = burst_to_bbox(eb, cfg);
        draw_box(img, a.cx, a.cy, a.w, a.h);
    }
    write_png(out_file, img);
    std::fprintf(stderr, "preview with %zu boxes written to %s\n", bursts.size(),
                 out_file.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Congested-spectrum scene synthesis and STFT sweep harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Render one dataset");
    gen->set_config("--config");
    SceneOptions gen_scene;
    std::uint64_t gen_seed = 0;
    int gen_scenes = 4000;
    std::string gen_split = "2800,800,400";
    std::string gen_stft = "128,128,hamming,0.5";
    double gen_floor = kDefaultFloorDb;
    int gen_image = 640;
    std::string gen_out;
    int gen_jobs = 1;
    add_scene_options(gen, gen_scene);
    gen->add_option("--scenes", gen_scenes, "Number of scenes")->capture_default_str();
    gen->add_option("--split", gen_split, "train,val,test counts")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
    gen->add_option("--stft", gen_stft, "W,F,window,overlap")->capture_default_str();
    gen->add_option("--floor-db", gen_floor, "Spectrogram dB floor")->capture_default_str();
    gen->add_option("--image-size", gen_image, "Output image size (square)")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--jobs", gen_jobs, "Worker threads")
        ->envname("RFSCENE_JOBS")
        ->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "Render one dataset per grid entry of a parameter study");
    sweep->set_config("--config");
    SceneOptions sweep_scene;
    std::uint64_t sweep_seed = 0;
    int sweep_scenes = 4000;
    std::string sweep_split;
    std::string sweep_kind;
    double sweep_floor = kDefaultFloorDb;
    int sweep_image = 640;
    std::string sweep_out;
    int sweep_jobs = 1;
    add_scene_options(sweep, sweep_scene);
    sweep->add_option("--kind,--sweep", sweep_kind,
                      "Grid: coarse, window, wintype, or overlap")
        ->required();
    sweep->add_option("--scenes", sweep_scenes, "Scenes per grid entry")
        ->capture_default_str();
    sweep->add_option("--split", sweep_split,
                      "train,val,test counts (default: all train)");
    sweep->add_option("--seed", sweep_seed, "Master seed")->capture_default_str();
    sweep->add_option("--floor-db", sweep_floor, "Spectrogram dB floor")
        ->capture_default_str();
    sweep->add_option("--image-size", sweep_image, "Output image size (square)")
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "Output directory")->required();
    sweep->add_option("--jobs", sweep_jobs, "Worker threads")
        ->envname("RFSCENE_JOBS")
        ->capture_default_str();

    // characterize
    auto* character = app.add_subcommand(
        "characterize", "Print the dataset characterization ratios");
    character->set_config("--config");
    SceneOptions char_scene;
    add_scene_options(character, char_scene);

    // evaluate
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "Score predictions (or the baseline detector) with mAP");
    eval_cmd->set_config("--config");
    std::string eval_dataset, eval_pred, eval_report;
    bool eval_baseline = false;
    eval_cmd->add_option("--dataset", eval_dataset, "Dataset directory")->required();
    auto* pred_opt =
        eval_cmd->add_option("--pred", eval_pred, "Prediction directory");
    eval_cmd->add_flag("--baseline", eval_baseline,
                       "Run the built-in energy detector instead of --pred");
    eval_cmd->add_option("--report", eval_report, "JSON report path");

    // preview
    auto* preview = app.add_subcommand(
        "preview", "Render one annotated spectrogram for inspection");
    preview->set_config("--config");
    SceneOptions prev_scene;
    std::uint64_t prev_seed = 0;
    int prev_index = 0;
    std::string prev_stft = "128,128,hamming,0.5";
    double prev_floor = kDefaultFloorDb;
    int prev_image = 640;
    std::string prev_out = "preview.png";
    add_scene_options(preview, prev_scene);
    preview->add_option("--seed", prev_seed, "Master seed")->capture_default_str();
    preview->add_option("--scene-index", prev_index, "Scene index")
        ->capture_default_str();
    preview->add_option("--stft", prev_stft, "W,F,window,overlap")
        ->capture_default_str();
    preview->add_option("--floor-db", prev_floor, "Spectrogram dB floor")
        ->capture_default_str();
    preview->add_option("--image-size", prev_image, "Output image size (square)")
        ->capture_default_str();
    preview->add_option("--out", prev_out, "Output PNG path")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return run_generate(gen_scene, gen_seed, gen_scenes, gen_split,
                                gen_stft, gen_floor, gen_image, gen_out, gen_jobs);
        }
        if (sweep->parsed()) {
            const auto grid = sweep_grid(sweep_from_name(sweep_kind));
            const std::string split_text =
                sweep_split.empty()
                    ? std::to_string(sweep_scenes) + ",0,0"
                    : sweep_split;
            for (const auto& cfg : grid.configs) {
                DatasetOptions opt;
                opt.scene = sweep_scene.resolve(sweep_seed);
                opt.stft = cfg;
                opt.n_scenes = sweep_scenes;
                opt.split = parse_split(split_text);
                opt.floor_db = sweep_floor;
                opt.image_height = sweep_image;
                opt.image_width = sweep_image;
                opt.jobs = sweep_jobs;
                const fs::path dir = fs::path(sweep_out) / cfg.label();
                build_dataset(opt, dir);
                std::fprintf(stderr, "sweep entry %s done\n", cfg.label().c_str());
            }
            return 0;
        }
        if (character->parsed()) {
            const auto c = characterize(char_scene.resolve(0));
            std::printf("r_f = %.10g\n", c.r_f);
            std::printf("r_t = %.10g\n", c.r_t);
            std::printf("mu_tf = %.10g\n", c.skewness);
            std::printf("w_opt = %d\n", c.w_opt);
            return 0;
        }
        if (eval_cmd->parsed()) {
            if (eval_baseline == pred_opt->count()) {
                throw CLI::ValidationError(
                    "evaluate", "exactly one of --pred or --baseline is required");
            }
            return run_evaluate(eval_dataset, eval_pred, eval_baseline,
                                eval_report);
        }
        if (preview->parsed()) {
            return run_preview(prev_scene, prev_seed, prev_index, prev_stft,
                               prev_floor, prev_image, prev_out);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
