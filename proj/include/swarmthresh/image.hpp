#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace swarmthresh {

inline constexpr int kLevels = 256; // gray levels, values in [0, 255]

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t pixel_count() const { return pixels.size(); }
    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

/// Loads a PNG or PGM (binary, P5) file as 8-bit grayscale.
///
/// Color inputs are reduced with integer rec-601 luma, rounded to nearest:
/// (299 R + 587 G + 114 B + 500) / 1000. Samples wider than 8 bits are
/// rescaled to [0, 255] first (65535 -> 255 is division by 257). Alpha is
/// ignored. Throws FileNotFound, UnsupportedFormat or CorruptImage.
GrayImage load_image(const std::string &path);

/// Writes an 8-bit grayscale PNG. A round-trip load yields identical pixels.
void write_image(const GrayImage &img, const std::string &path);

} // namespace swarmthresh
