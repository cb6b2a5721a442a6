#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rfscene/dataset.hpp"

using namespace rfscene;
namespace fs = std::filesystem;

namespace {

std::string grid_line(const StftConfig& c) {
    std::ostringstream ss;
    ss << "W" << c.window_len << "F" << c.fft_size << " " << window_name(c.window)
       << " " << static_cast<int>(std::lround(c.overlap * 100));
    return ss.str();
}

std::string golden(const char* name) {
    const fs::path path = fs::path(RFSCENE_TEST_DATA_DIR) / name;
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// relative path -> file bytes for every regular file under root
std::map<std::string, std::string> tree_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream f(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        out[fs::relative(entry.path(), root).string()] = ss.str();
    }
    return out;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

DatasetOptions small_options() {
    DatasetOptions opt;
    opt.scene.master_seed = 7;
    opt.n_scenes = 4;
    opt.split = {2, 1, 1};
    opt.image_height = 256;
    opt.image_width = 256;
    return opt;
}

}  // namespace

TEST_CASE("sweep grids reproduce the study tables") {
    const struct {
        SweepKind kind;
        const char* file;
        std::size_t count;
    } cases[] = {
        {SweepKind::CoarseWf, "grid_coarse.txt", 16},
        {SweepKind::FineWindow, "grid_window.txt", 8},
        {SweepKind::WindowType, "grid_wintype.txt", 9},
        {SweepKind::Overlap, "grid_overlap.txt", 9},
    };
    for (const auto& tc : cases) {
        const auto grid = sweep_grid(tc.kind);
        CHECK(grid.configs.size() == tc.count);
        std::ostringstream got;
        for (const auto& cfg : grid.configs) got << grid_line(cfg) << "\n";
        CAPTURE(tc.file);
        CHECK(got.str() == golden(tc.file));
    }
}

TEST_CASE("grid spot values") {
    const auto coarse = sweep_grid(SweepKind::CoarseWf);
    bool has_w64_f16384 = false;
    for (const auto& c : coarse.configs) {
        if (c.window_len == 64 && c.fft_size == 16384) has_w64_f16384 = true;
    }
    CHECK(has_w64_f16384);

    const auto fine = sweep_grid(SweepKind::FineWindow);
    bool has_128 = false;
    for (const auto& c : fine.configs) {
        has_128 |= c.window_len == 128 && c.fft_size == 128;
        CHECK(c.window_len == c.fft_size);
    }
    CHECK(has_128);

    const auto overlap = sweep_grid(SweepKind::Overlap);
    for (std::size_t i = 0; i < overlap.configs.size(); ++i) {
        CHECK(overlap.configs[i].overlap ==
              doctest::Approx(0.1 * (i + 1)).epsilon(1e-12));
    }

    CHECK(sweep_from_name("wintype") == SweepKind::WindowType);
    CHECK_THROWS_AS(sweep_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("dataset layout and determinism") {
    const auto opt = small_options();
    const auto dir1 = fresh_dir("rfscene_ds1");
    const auto dir2 = fresh_dir("rfscene_ds2");
    const auto manifest = build_dataset(opt, dir1);
    build_dataset(opt, dir2);

    CHECK(manifest.items.size() == 4);
    CHECK(fs::exists(dir1 / "images/train/scene_000000.png"));
    CHECK(fs::exists(dir1 / "images/train/scene_000001.png"));
    CHECK(fs::exists(dir1 / "images/val/scene_000002.png"));
    CHECK(fs::exists(dir1 / "images/test/scene_000003.png"));
    CHECK(fs::exists(dir1 / "labels/val/scene_000002.txt"));
    CHECK(fs::exists(dir1 / "manifest.json"));
    CHECK(manifest.class_names.size() == 8);
    CHECK(manifest.class_names[0] == "QPSK");
    CHECK(manifest.class_names[7] == "OFDM-QPSK");

    const auto t1 = tree_bytes(dir1);
    const auto t2 = tree_bytes(dir2);
    CHECK(t1 == t2);

    // parallel build is bit-identical
    auto opt4 = opt;
    opt4.jobs = 4;
    const auto dir3 = fresh_dir("rfscene_ds3");
    build_dataset(opt4, dir3);
    CHECK(tree_bytes(dir3) == t1);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
    fs::remove_all(dir3);
}

TEST_CASE("split counts must sum to the scene count") {
    auto opt = small_options();
    opt.split = {3, 1, 1};
    const auto dir = fresh_dir("rfscene_bad");
    CHECK_THROWS_AS(build_dataset(opt, dir), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("labels do not depend on the stft configuration") {
    auto opt_a = small_options();
    auto opt_b = small_options();
    opt_b.stft = StftConfig{WindowType::Blackman, 64, 256, 0.3};
    const auto dir_a = fresh_dir("rfscene_la");
    const auto dir_b = fresh_dir("rfscene_lb");
    build_dataset(opt_a, dir_a);
    build_dataset(opt_b, dir_b);
    const auto ta = tree_bytes(dir_a);
    const auto tb = tree_bytes(dir_b);
    bool images_differ = false;
    for (const auto& [rel, bytes] : ta) {
        if (rel.starts_with("labels/")) {
            CHECK(tb.at(rel) == bytes);
        } else if (rel.starts_with("images/")) {
            images_differ |= tb.at(rel) != bytes;
        }
    }
    CHECK(images_differ);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("a dataset can be regenerated from its manifest alone") {
    const auto opt = small_options();
    const auto dir = fresh_dir("rfscene_src");
    build_dataset(opt, dir);

    const auto manifest = read_manifest(dir / "manifest.json");
    CHECK(manifest.options.scene.master_seed == opt.scene.master_seed);
    CHECK(manifest.options.stft.window_len == opt.stft.window_len);

    auto rebuilt_options = manifest.options;
    const auto dir2 = fresh_dir("rfscene_rebuild");
    build_dataset(rebuilt_options, dir2);
    CHECK(tree_bytes(dir) == tree_bytes(dir2));

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("split assignment is contiguous") {
    SplitCounts split{2800, 800, 400};
    CHECK(split_of_index(split, 0) == "train");
    CHECK(split_of_index(split, 2799) == "train");
    CHECK(split_of_index(split, 2800) == "val");
    CHECK(split_of_index(split, 3599) == "val");
    CHECK(split_of_index(split, 3600) == "test");
    CHECK(split_of_index(split, 3999) == "test");
    CHECK(scene_basename(42) == "scene_000042");
}
