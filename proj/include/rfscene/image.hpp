#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rfscene/stft.hpp"

namespace rfscene {

struct Image8 {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top

    std::uint8_t& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// Grayscale rendering: frequency on the vertical axis increasing upward
// (bin 0 at the bottom row), time left to right. [floor_db, 0] maps linearly
// to [0, 255]; bilinear resample from the native (bins x frames) grid.
Image8 render_image(const Spectrogram& sg, int out_height, int out_width);

// 1-pixel rectangle outline; box given in normalized image coordinates.
void draw_box(Image8& img, double cx, double cy, double w, double h,
              std::uint8_t value = 255);

// 8-bit grayscale PNG. Deterministic output (fixed zlib level).
void write_png(const std::filesystem::path& path, const Image8& img);

}  // namespace rfscene
