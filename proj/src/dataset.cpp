#include "rfscene/dataset.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rfscene/annotate.hpp"
#include "rfscene/image.hpp"

namespace rfscene {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

SweepKind sweep_from_name(std::string_view name) {
    if (name == "coarse") return SweepKind::CoarseWf;
    if (name == "window") return SweepKind::FineWindow;
    if (name == "wintype") return SweepKind::WindowType;
    if (name == "overlap") return SweepKind::Overlap;
    throw std::invalid_argument("unknown sweep kind: " + std::string(name));
}

std::string_view sweep_name(SweepKind kind) {
    switch (kind) {
        case SweepKind::CoarseWf: return "coarse";
        case SweepKind::FineWindow: return "window";
        case SweepKind::WindowType: return "wintype";
        case SweepKind::Overlap: return "overlap";
    }
    throw std::invalid_argument("unknown sweep kind");
}

SweepGrid sweep_grid(SweepKind kind) {
    SweepGrid grid;
    grid.kind = kind;
    switch (kind) {
        case SweepKind::CoarseWf: {
            for (int w : {64, 256, 1024, 4096}) {
                for (int mult : {4, 16, 64, 256}) {
                    grid.configs.push_back(
                        {WindowType::Hamming, w, w * mult, 0.5});
                }
            }
            break;
        }
        case SweepKind::FineWindow: {
            for (int w : {8, 16, 32, 64, 128, 256, 1024, 4096}) {
                grid.configs.push_back({WindowType::Hamming, w, w, 0.5});
            }
            break;
        }
        case SweepKind::WindowType: {
            for (int i = 0; i < kNumWindowTypes; ++i) {
                grid.configs.push_back(
                    {static_cast<WindowType>(i), 128, 128, 0.5});
            }
            break;
        }
        case SweepKind::Overlap: {
            for (int pct = 10; pct <= 90; pct += 10) {
                grid.configs.push_back(
                    {WindowType::Hamming, 128, 128, pct / 100.0});
            }
            break;
        }
    }
    return grid;
}

std::string split_of_index(const SplitCounts& split, int index) {
    if (index < split.train) return "train";
    if (index < split.train + split.val) return "val";
    return "test";
}

std::string scene_basename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%06d", index);
    return buf;
}

namespace {

ordered_json scene_config_json(const SceneConfig& c) {
    return ordered_json{
        {"sample_rate_hz", c.sample_rate_hz},
        {"timeslot_len", c.timeslot_len},
        {"n_timeslots", c.n_timeslots},
        {"carrier_hz", {c.carrier_hz.lo, c.carrier_hz.hi}},
        {"half_bw_hz", {c.half_bw_hz.lo, c.half_bw_hz.hi}},
        {"duration_frac", {c.duration_frac.lo, c.duration_frac.hi}},
        {"snr_db", {c.snr_db.lo, c.snr_db.hi}},
        {"emitters_per_timeslot", {c.emitters_min, c.emitters_max}},
        {"master_seed", c.master_seed},
    };
}

SceneConfig scene_config_from_json(const ordered_json& j) {
    SceneConfig c;
    c.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    c.timeslot_len = j.at("timeslot_len").get<int>();
    c.n_timeslots = j.at("n_timeslots").get<int>();
    auto range = [&](const char* key) {
        const auto& r = j.at(key);
        return ParamRange{r.at(0).get<double>(), r.at(1).get<double>()};
    };
    c.carrier_hz = range("carrier_hz");
    c.half_bw_hz = range("half_bw_hz");
    c.duration_frac = range("duration_frac");
    c.snr_db = range("snr_db");
    c.emitters_min = j.at("emitters_per_timeslot").at(0).get<int>();
    c.emitters_max = j.at("emitters_per_timeslot").at(1).get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    return c;
}

ordered_json stft_config_json(const StftConfig& c) {
    return ordered_json{
        {"window", std::string(window_name(c.window))},
        {"window_len", c.window_len},
        {"fft_size", c.fft_size},
        {"overlap", c.overlap},
    };
}

StftConfig stft_config_from_json(const ordered_json& j) {
    StftConfig c;
    c.window = window_from_name(j.at("window").get<std::string>());
    c.window_len = j.at("window_len").get<int>();
    c.fft_size = j.at("fft_size").get<int>();
    c.overlap = j.at("overlap").get<double>();
    return c;
}

}  // namespace

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
    ordered_json j;
    j["format_version"] = manifest.format_version;
    j["scene_config"] = scene_config_json(manifest.options.scene);
    j["stft_config"] = stft_config_json(manifest.options.stft);
    j["n_scenes"] = manifest.options.n_scenes;
    j["split"] = {{"train", manifest.options.split.train},
                  {"val", manifest.options.split.val},
                  {"test", manifest.options.split.test}};
    j["floor_db"] = manifest.options.floor_db;
    j["image_size"] = {manifest.options.image_height, manifest.options.image_width};
    j["class_names"] = manifest.class_names;
    ordered_json items = ordered_json::array();
    for (const ManifestItem& it : manifest.items) {
        items.push_back(ordered_json{{"index", it.index},
                                     {"split", it.split},
                                     {"image", it.image},
                                     {"label", it.label},
                                     {"scene_seed", it.scene_seed}});
    }
    j["items"] = std::move(items);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open manifest: " + path.string());
    ordered_json j = ordered_json::parse(f);

    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != 1) {
        throw std::runtime_error("unsupported manifest format version");
    }
    m.options.scene = scene_config_from_json(j.at("scene_config"));
    m.options.stft = stft_config_from_json(j.at("stft_config"));
    m.options.n_scenes = j.at("n_scenes").get<int>();
    m.options.split.train = j.at("split").at("train").get<int>();
    m.options.split.val = j.at("split").at("val").get<int>();
    m.options.split.test = j.at("split").at("test").get<int>();
    m.options.floor_db = j.at("floor_db").get<double>();
    m.options.image_height = j.at("image_size").at(0).get<int>();
    m.options.image_width = j.at("image_size").at(1).get<int>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& it : j.at("items")) {
        m.items.push_back(ManifestItem{it.at("index").get<int>(),
                                       it.at("split").get<std::string>(),
                                       it.at("image").get<std::string>(),
                                       it.at("label").get<std::string>(),
                                       it.at("scene_seed").get<std::uint64_t>()});
    }
    return m;
}

DatasetManifest build_dataset(const DatasetOptions& options,
                              const fs::path& out_dir) {
    options.scene.validate();
    options.stft.validate();
    if (options.n_scenes < 1) throw std::invalid_argument("n_scenes must be >= 1");
    if (options.split.total() != options.n_scenes) {
        throw std::invalid_argument("split counts must sum to the scene count");
    }

    for (const char* split : {"train", "val", "test"}) {
        fs::create_directories(out_dir / "images" / split);
        fs::create_directories(out_dir / "labels" / split);
    }

    DatasetManifest manifest;
    manifest.options = options;
    for (int i = 0; i < kNumSchemes; ++i) {
        manifest.class_names.emplace_back(scheme_name(scheme_from_id(i)));
    }
    manifest.items.resize(options.n_scenes);

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            const int index = next.fetch_add(1);
            if (index >= options.n_scenes) return;
            try {
                const SceneSpec spec = sample_scenario(options.scene, index);
                auto [iq, bursts] = render_scene(spec);
                const Spectrogram sg =
                    spectrogram(iq, options.stft, options.floor_db);
                const Image8 img =
                    render_image(sg, options.image_height, options.image_width);
                const auto annotations =
                    annotate_scene(bursts, options.scene);

                const std::string split = split_of_index(options.split, index);
                const std::string base = scene_basename(index);
                const std::string image_rel = "images/" + split + "/" + base + ".png";
                const std::string label_rel = "labels/" + split + "/" + base + ".txt";
                write_png(out_dir / image_rel, img);
                write_labels(annotations, out_dir / label_rel);

                manifest.items[index] =
                    ManifestItem{index, split, image_rel, label_rel, spec.scene_seed};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(options.n_scenes);
                return;
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    write_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

}  // namespace rfscene
