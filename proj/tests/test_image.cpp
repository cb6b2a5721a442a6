#include <doctest.h>

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "rfscene/image.hpp"

using namespace rfscene;

namespace {

Spectrogram flat_spectrogram(std::size_t frames, std::size_t bins, double value,
                             double floor_db = -80.0) {
    Spectrogram sg;
    sg.n_frames = frames;
    sg.n_bins = bins;
    sg.n_samples = frames * bins;
    sg.db.assign(frames * bins, value);
    sg.floor_db = floor_db;
    sg.config = StftConfig{WindowType::Hamming, 2, static_cast<int>(bins), 0.5};
    return sg;
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("endpoint mapping to pixel values") {
    auto sg = flat_spectrogram(2, 2, -80.0);
    sg.db[0] = 0.0;    // frame 0, bin 0
    sg.db[3] = -40.0;  // frame 1, bin 1
    const auto img = render_image(sg, 2, 2);
    // bin 0 is the bottom row; frame is the column
    CHECK(img.at(1, 0) == 255);
    CHECK(img.at(0, 1) == 128);  // halfway up the dB range
    CHECK(img.at(1, 1) == 0);
    CHECK(img.at(0, 0) == 0);
}

TEST_CASE("native-size render of a one-hot spectrogram has one bright pixel") {
    auto sg = flat_spectrogram(9, 7, -80.0);
    const std::size_t frame = 4, bin = 2;
    sg.db[frame * sg.n_bins + bin] = 0.0;
    const auto img = render_image(sg, static_cast<int>(sg.n_bins),
                                  static_cast<int>(sg.n_frames));
    int bright = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.at(y, x) == 255) {
                ++bright;
                CHECK(x == static_cast<int>(frame));
                CHECK(y == static_cast<int>(sg.n_bins - 1 - bin));
            } else {
                CHECK(img.at(y, x) == 0);
            }
        }
    }
    CHECK(bright == 1);
}

TEST_CASE("constant spectrogram renders uniformly at any size") {
    const auto sg = flat_spectrogram(33, 17, -27.5);
    const auto img = render_image(sg, 64, 48);
    for (std::size_t i = 1; i < img.pixels.size(); ++i) {
        CHECK(img.pixels[i] == img.pixels[0]);
    }
}

TEST_CASE("png round-trips through zlib") {
    Image8 img;
    img.height = 5;
    img.width = 3;
    img.pixels = {0, 50, 100, 150, 200, 250, 1, 2, 3, 4, 5, 6, 7, 8, 255};
    const auto path = temp_path("rfscene_png_test.png");
    write_png(path, img);

    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() > 45);
    CHECK(bytes[1] == 'P');
    CHECK(bytes[2] == 'N');
    CHECK(bytes[3] == 'G');
    // IHDR starts at offset 16: width, height big-endian
    const auto be32 = [&](std::size_t off) {
        return (static_cast<std::uint32_t>(bytes[off]) << 24) |
               (static_cast<std::uint32_t>(bytes[off + 1]) << 16) |
               (static_cast<std::uint32_t>(bytes[off + 2]) << 8) |
               static_cast<std::uint32_t>(bytes[off + 3]);
    };
    CHECK(be32(16) == 3u);
    CHECK(be32(20) == 5u);
    CHECK(bytes[24] == 8);  // bit depth
    CHECK(bytes[25] == 0);  // grayscale

    // Inflate the IDAT payload and compare filtered scanlines.
    const std::size_t idat_len = be32(33);
    const std::size_t idat_data = 41;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(5) * 4);
    uLongf raw_len = raw.size();
    REQUIRE(uncompress(raw.data(), &raw_len, bytes.data() + idat_data,
                       static_cast<uLong>(idat_len)) == Z_OK);
    REQUIRE(raw_len == 5 * 4);
    for (int y = 0; y < 5; ++y) {
        CHECK(raw[y * 4] == 0);  // filter byte
        for (int x = 0; x < 3; ++x) {
            CHECK(raw[y * 4 + 1 + x] == img.at(y, x));
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("png bytes are deterministic") {
    Image8 img;
    img.height = 16;
    img.width = 16;
    img.pixels.resize(256);
    for (int i = 0; i < 256; ++i) img.pixels[i] = static_cast<std::uint8_t>(i);
    const auto p1 = temp_path("rfscene_det1.png");
    const auto p2 = temp_path("rfscene_det2.png");
    write_png(p1, img);
    write_png(p2, img);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::vector<char> b1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    std::vector<char> b2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("box outlines stay inside the image") {
    Image8 img;
    img.height = 32;
    img.width = 32;
    img.pixels.assign(32 * 32, 0);
    draw_box(img, 0.5, 0.0, 0.5, 0.4, 200);  // top edge clipped
    int touched = 0;
    for (auto v : img.pixels) touched += v == 200;
    CHECK(touched > 0);
}
