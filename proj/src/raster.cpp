#include "palmforge/raster.hpp"

#include <algorithm>
#include <cmath>

namespace palmforge {

void validate_binary(const EdgeMap& edge) {
  for (auto v : edge.bits.pixels())
    if (v > 1) throw ConfigError("edge map must be binary (0/1)");
}

RealImage to_real(const GrayImage& img) {
  RealImage out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.pixels().begin(),
                         [](std::uint8_t v) { return static_cast<double>(v); });
  return out;
}

GrayImage to_gray(const RealImage& img) {
  GrayImage out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.pixels().begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  });
  return out;
}

GrayImage edge_to_gray(const EdgeMap& edge) {
  GrayImage out(edge.width(), edge.height());
  std::ranges::transform(edge.bits.pixels(), out.pixels().begin(),
                         [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  return out;
}

EdgeMap gray_to_edge(const GrayImage& img) {
  EdgeMap out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.bits.pixels().begin(),
                         [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 1 : 0); });
  return out;
}

}  // namespace palmforge
