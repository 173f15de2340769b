#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "palmforge/error.hpp"

namespace palmforge {

/// Row-major single-channel image.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw ConfigError("raster dimensions must be non-negative");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<T> pixels() noexcept { return pixels_; }
  std::span<const T> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> pixels_;
};

using GrayImage = Raster<std::uint8_t>;
using RealImage = Raster<double>;

/// Side length of the canonical palm frame.
inline constexpr int kFrameSize = 256;

/// Binary texture map; each pixel is 0 (background) or 1 (edge).
struct EdgeMap {
  Raster<std::uint8_t> bits;

  EdgeMap() = default;
  explicit EdgeMap(int width, int height) : bits(width, height, 0) {}
  explicit EdgeMap(Raster<std::uint8_t> b) : bits(std::move(b)) {}

  int width() const noexcept { return bits.width(); }
  int height() const noexcept { return bits.height(); }
  std::uint8_t operator()(int x, int y) const noexcept { return bits(x, y); }
  std::uint8_t& operator()(int x, int y) noexcept { return bits(x, y); }
  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : bits.pixels()) n += v;
    return n;
  }

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;
};

/// Throws ConfigError unless every pixel is 0 or 1.
void validate_binary(const EdgeMap& edge);

/// Horizontal mirror of the whole raster.
template <typename T>
Raster<T> mirror_horizontal(const Raster<T>& src) {
  Raster<T> out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) out(src.width() - 1 - x, y) = src(x, y);
  return out;
}

inline EdgeMap mirror_horizontal(const EdgeMap& e) { return EdgeMap(mirror_horizontal(e.bits)); }

RealImage to_real(const GrayImage& img);

/// Rounds to nearest and clamps into [0,255].
GrayImage to_gray(const RealImage& img);

/// 0/1 edge map to 0/255 grayscale.
GrayImage edge_to_gray(const EdgeMap& edge);

/// Any non-zero pixel becomes an edge.
EdgeMap gray_to_edge(const GrayImage& img);

}  // namespace palmforge
