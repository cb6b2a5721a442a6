#include "rfscene/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rfscene {

Image8 render_image(const Spectrogram& sg, int out_height, int out_width) {
    if (out_height < 1 || out_width < 1) {
        throw std::invalid_argument("output image dimensions must be >= 1");
    }
    const auto src_h = static_cast<int>(sg.n_bins);
    const auto src_w = static_cast<int>(sg.n_frames);
    if (src_h == 0 || src_w == 0) {
        throw std::invalid_argument("empty spectrogram");
    }

    // Native grid value with frequency flipped so bin 0 is the bottom row.
    auto native = [&](int y, int x) {
        return sg.at(static_cast<std::size_t>(x),
                     static_cast<std::size_t>(src_h - 1 - y));
    };

    Image8 img;
    img.height = out_height;
    img.width = out_width;
    img.pixels.resize(static_cast<std::size_t>(out_height) * out_width);

    const double scale_y = static_cast<double>(src_h) / out_height;
    const double scale_x = static_cast<double>(src_w) / out_width;
    const double span = -sg.floor_db;
    for (int oy = 0; oy < out_height; ++oy) {
        const double sy = (oy + 0.5) * scale_y - 0.5;
        const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, src_h - 1);
        const int y1 = std::min(y0 + 1, src_h - 1);
        const double fy = std::clamp(sy - y0, 0.0, 1.0);
        for (int ox = 0; ox < out_width; ++ox) {
            const double sx = (ox + 0.5) * scale_x - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, src_w - 1);
            const int x1 = std::min(x0 + 1, src_w - 1);
            const double fx = std::clamp(sx - x0, 0.0, 1.0);
            const double v =
                (1.0 - fy) * ((1.0 - fx) * native(y0, x0) + fx * native(y0, x1)) +
                fy * ((1.0 - fx) * native(y1, x0) + fx * native(y1, x1));
            const double norm = (v - sg.floor_db) / span;
            const int p = static_cast<int>(std::lround(norm * 255.0));
            img.at(oy, ox) = static_cast<std::uint8_t>(std::clamp(p, 0, 255));
        }
    }
    return img;
}

void draw_box(Image8& img, double cx, double cy, double w, double h,
              std::uint8_t value) {
    const int x1 = std::clamp(static_cast<int>(std::lround((cx - w / 2) * img.width)), 0,
                              img.width - 1);
    const int x2 = std::clamp(static_cast<int>(std::lround((cx + w / 2) * img.width)) - 1,
                              0, img.width - 1);
    const int y1 = std::clamp(static_cast<int>(std::lround((cy - h / 2) * img.height)), 0,
                              img.height - 1);
    const int y2 = std::clamp(static_cast<int>(std::lround((cy + h / 2) * img.height)) - 1,
                              0, img.height - 1);
    for (int x = x1; x <= x2; ++x) {
        img.at(y1, x) = value;
        img.at(y2, x) = value;
    }
    for (int y = y1; y <= y2; ++y) {
        img.at(y, x1) = value;
        img.at(y, x2) = value;
    }
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::uint8_t* data, std::size_t len) {
    put_u32(out, static_cast<std::uint32_t>(len));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    if (len > 0) out.insert(out.end(), data, data + len);
    std::uint32_t crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, out.data() + start, static_cast<uInt>(4 + len));
    put_u32(out, crc);
}

}  // namespace

void write_png(const std::filesystem::path& path, const Image8& img) {
    // Raw scanlines, filter byte 0 per row.
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(img.height) * (img.width + 1));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const auto* row = img.pixels.data() + static_cast<std::size_t>(y) * img.width;
        raw.insert(raw.end(), row, row + img.width);
    }

    uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_cap);
    if (compress2(comp.data(), &comp_cap, raw.data(),
                  static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw std::runtime_error("PNG deflate failed");
    }
    comp.resize(comp_cap);

    std::vector<std::uint8_t> out;
    static constexpr std::uint8_t magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    out.insert(out.end(), magic, magic + 8);

    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
    ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
    ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
    ihdr[3] = static_cast<std::uint8_t>(img.width);
    ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
    ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
    ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
    ihdr[7] = static_cast<std::uint8_t>(img.height);
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 0;   // grayscale
    ihdr[10] = 0;  // compression
    ihdr[11] = 0;  // filter
    ihdr[12] = 0;  // no interlace
    put_chunk(out, "IHDR", ihdr, sizeof(ihdr));
    put_chunk(out, "IDAT", comp.data(), comp.size());
    put_chunk(out, "IEND", nullptr, 0);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()),
            static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rfscene
