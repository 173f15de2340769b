#include "palmforge/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace palmforge {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

// Writes rows that are already packed for the requested bit depth.
void write_rows(const std::filesystem::path& path, int width, int height, int bit_depth,
                const std::vector<std::vector<png_byte>>& rows) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  // Write to a sibling temp file, then rename, so readers never see partial PNGs.
  auto tmp = path;
  tmp += ".tmp";
  {
    FilePtr f = open_file(tmp, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
      png_destroy_write_struct(&png, nullptr);
      throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
      png_destroy_write_struct(&png, &info);
      throw IoError("libpng error while writing '" + path.string() + "'");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (const auto& row : rows) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

PngHeader read_png_header(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError("'" + path.string() + "' is not a PNG file");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng error while reading '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  PngHeader h;
  h.width = static_cast<int>(png_get_image_width(png, info));
  h.height = static_cast<int>(png_get_image_height(png, info));
  h.bit_depth = png_get_bit_depth(png, info);
  h.channels = png_get_channels(png, info);
  png_destroy_read_struct(&png, &info, nullptr);
  return h;
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError("'" + path.string() + "' is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  GrayImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng error while reading '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  const auto depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(width)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + path.string() + "' did not decode to 8-bit single channel");
  }
  img = GrayImage(width, height);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[y] = &img(0, y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png_gray(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<std::vector<png_byte>> rows(static_cast<std::size_t>(img.height()));
  for (int y = 0; y < img.height(); ++y)
    rows[y].assign(&img(0, y), &img(0, y) + img.width());
  write_rows(path, img.width(), img.height(), 8, rows);
}

void write_png_edge(const std::filesystem::path& path, const EdgeMap& edge) {
  validate_binary(edge);
  const int width = edge.width();
  std::vector<std::vector<png_byte>> rows(static_cast<std::size_t>(edge.height()));
  for (int y = 0; y < edge.height(); ++y) {
    auto& row = rows[y];
    row.assign(static_cast<std::size_t>((width + 7) / 8), 0);
    for (int x = 0; x < width; ++x)
      if (edge(x, y)) row[x / 8] |= static_cast<png_byte>(0x80u >> (x % 8));
  }
  write_rows(path, width, edge.height(), 1, rows);
}

EdgeMap read_png_edge(const std::filesystem::path& path) {
  const GrayImage g = read_png_gray(path);
  for (auto v : g.pixels())
    if (v != 0 && v != 255)
      throw IoError("'" + path.string() + "' is not a 0/255 edge map");
  return gray_to_edge(g);
}

}  // namespace palmforge
