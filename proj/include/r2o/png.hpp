#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace r2o::png {

/// Row-major 8-bit grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// 8-bit grayscale, non-interlaced, filter type 0 on every row.
std::vector<std::uint8_t> encode(const GrayImage& image);

/// Accepts 8-bit non-interlaced grayscale, gray+alpha, RGB and RGBA; colour
/// input is converted to luma. Throws Error(InvalidImage).
GrayImage decode(std::span<const std::uint8_t> bytes);

/// Width and height from the IHDR chunk without inflating the image data.
bool read_dimensions(std::span<const std::uint8_t> bytes, int& width, int& height) noexcept;

}  // namespace r2o::png
