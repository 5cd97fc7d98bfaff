#pragma once

#include <filesystem>

#include "dictscan/image.hpp"

namespace dictscan {

/// Reads a PNG or single-page TIFF (8-bit grey, or 24-bit colour converted
/// with integer BT.601 luma). Throws ImageIoError.
GrayImage load_image(const std::filesystem::path& path);

void save_png(const GrayImage& img, const std::filesystem::path& path);

/// Binary masks are written as 0 = white, 1 = black.
void save_png(const BinaryImage& img, const std::filesystem::path& path);

/// 24-bit RGB PNG, used to exercise colour input.
void save_png_rgb(int width, int height, const std::vector<std::uint8_t>& rgb,
                  const std::filesystem::path& path);

/// 8-bit greyscale single-page TIFF.
void save_tiff(const GrayImage& img, const std::filesystem::path& path);

}  // namespace dictscan
