#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hanet/tensor.hpp"

namespace hanet {

/// 8-bit raster, RGB interleaved (height x width x channels). This is the
/// on-disk layer; the network consumes CHW tensors (see to_chw_tensor).
struct ByteImage {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int row, int col, int ch) const {
        return pixels[static_cast<std::size_t>((static_cast<std::int64_t>(row) * width + col) * channels + ch)];
    }
    std::uint8_t& at(int row, int col, int ch) {
        return pixels[static_cast<std::size_t>((static_cast<std::int64_t>(row) * width + col) * channels + ch)];
    }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(height) * width; }
};

/// Per-pixel binary map; values are 0 or 1.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    std::uint8_t at(int row, int col) const {
        return values[static_cast<std::size_t>(static_cast<std::int64_t>(row) * width + col)];
    }
    std::uint8_t& at(int row, int col) {
        return values[static_cast<std::size_t>(static_cast<std::int64_t>(row) * width + col)];
    }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(height) * width; }
};

ByteImage make_image(int height, int width, int channels = 3);
BinaryMask make_mask(int height, int width);

/// Convert to a (channels, height, width) tensor scaled to [0, 1].
Tensor to_chw_tensor(const ByteImage& img);

/// Read a color raster (PNG/TIFF via the OpenCV codecs), returned as RGB.
ByteImage read_image(const std::filesystem::path& path);

/// Read a label raster as a binary mask; any nonzero source value maps to 1.
BinaryMask read_mask(const std::filesystem::path& path);

/// Write an RGB raster as PNG (lossless).
void write_image(const std::filesystem::path& path, const ByteImage& img);

/// Write a mask as an 8-bit PNG with values {0, 255}.
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace hanet
