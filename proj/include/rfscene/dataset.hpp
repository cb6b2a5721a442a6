#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rfscene/scenario.hpp"
#include "rfscene/stft.hpp"

namespace rfscene {

enum class SweepKind { CoarseWf, FineWindow, WindowType, Overlap };

SweepKind sweep_from_name(std::string_view name);
std::string_view sweep_name(SweepKind kind);

struct SweepGrid {
    SweepKind kind;
    std::vector<StftConfig> configs;
};

// The four study grids: coarse W x F (16 entries), fine window length
// W = F (8), window type at W = F = 128 (9), overlap 10%..90% (9).
SweepGrid sweep_grid(SweepKind kind);

struct SplitCounts {
    int train = 2800;
    int val = 800;
    int test = 400;

    int total() const { return train + val + test; }
};

struct DatasetOptions {
    SceneConfig scene;
    StftConfig stft;
    int n_scenes = 4000;
    SplitCounts split;
    double floor_db = -80.0;
    int image_height = 640;
    int image_width = 640;
    int jobs = 1;  // execution knob; not part of the manifest
};

struct ManifestItem {
    int index = 0;
    std::string split;
    std::string image;  // path relative to the dataset root
    std::string label;
    std::uint64_t scene_seed = 0;
};

struct DatasetManifest {
    int format_version = 1;
    DatasetOptions options;
    std::vector<std::string> class_names;
    std::vector<ManifestItem> items;
};

// Renders every scene (image + label file) under out_dir and seals the
// manifest last. Layout: images/{train,val,test}/scene_%06d.png and
// labels/{split}/scene_%06d.txt. Deterministic for a fixed seed regardless
// of options.jobs.
DatasetManifest build_dataset(const DatasetOptions& options,
                              const std::filesystem::path& out_dir);

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

std::string split_of_index(const SplitCounts& split, int index);
std::string scene_basename(int index);

}  // namespace rfscene
