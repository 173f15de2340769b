#pragma once

#include <filesystem>

#include "palmforge/raster.hpp"

namespace palmforge {

/// Reads a PNG as 8-bit grayscale. Sub-byte grayscale is expanded to 0..255,
/// 16-bit is stripped, color is converted with the libpng default weights.
struct PngHeader {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
};

/// Reads only the IHDR fields.
PngHeader read_png_header(const std::filesystem::path& path);

GrayImage read_png_gray(const std::filesystem::path& path);

void write_png_gray(const std::filesystem::path& path, const GrayImage& img);

/// Edge maps are stored as 1-bit grayscale; they decode to 0/255.
void write_png_edge(const std::filesystem::path& path, const EdgeMap& edge);
EdgeMap read_png_edge(const std::filesystem::path& path);

}  // namespace palmforge
