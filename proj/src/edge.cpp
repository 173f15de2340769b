#include "palmforge/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace palmforge {

void CannyConfig::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("canny sigma must be > 0");
  if (!(low_threshold > 0.0) || !(low_threshold <= high_threshold))
    throw ConfigError("canny thresholds must satisfy 0 < low <= high (got low=" +
                      std::to_string(low_threshold) + ", high=" +
                      std::to_string(high_threshold) + ")");
  if (!(gradient_scale > 0.0)) throw ConfigError("canny gradient_scale must be > 0");
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (auto& w : k) w /= sum;
  return k;
}

RealImage gaussian_smooth(const RealImage& img, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width(), h = img.height();
  if (img.empty()) return img;

  RealImage tmp(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[static_cast<std::size_t>(i + radius)] * img(std::clamp(x + i, 0, w - 1), y);
      tmp(x, y) = acc;
    }
  RealImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[static_cast<std::size_t>(i + radius)] * tmp(x, std::clamp(y + i, 0, h - 1));
      out(x, y) = acc;
    }
  return out;
}

Orientation quantize_orientation(double gx, double gy) noexcept {
  // tan(67.5 deg) = 1 + sqrt(2). Written so that swapping |gx| and |gy|
  // swaps the 0/90 outcome exactly.
  constexpr double k = 1.0 + std::numbers::sqrt2;
  const double ax = std::abs(gx), ay = std::abs(gy);
  if (ay * k <= ax) return Orientation::deg0;
  if (ax * k <= ay) return Orientation::deg90;
  return ((gx > 0) == (gy > 0)) ? Orientation::deg45 : Orientation::deg135;
}

Gradients sobel_gradients(const RealImage& img) {
  const int w = img.width(), h = img.height();
  Gradients g{RealImage(w, h, 0.0), Raster<Orientation>(w, h, Orientation::deg0)};
  for (int y = 1; y + 1 < h; ++y)
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = (img(x + 1, y - 1) + 2.0 * img(x + 1, y) + img(x + 1, y + 1)) -
                        (img(x - 1, y - 1) + 2.0 * img(x - 1, y) + img(x - 1, y + 1));
      const double gy = (img(x - 1, y + 1) + 2.0 * img(x, y + 1) + img(x + 1, y + 1)) -
                        (img(x - 1, y - 1) + 2.0 * img(x, y - 1) + img(x + 1, y - 1));
      g.magnitude(x, y) = std::sqrt(gx * gx + gy * gy);
      g.orientation(x, y) = quantize_orientation(gx, gy);
    }
  return g;
}

RealImage non_max_suppress(const RealImage& magnitude, const Raster<Orientation>& orientation) {
  if (magnitude.width() != orientation.width() || magnitude.height() != orientation.height())
    throw ConfigError("non_max_suppress: magnitude and orientation shapes differ");
  const int w = magnitude.width(), h = magnitude.height();
  auto at = [&](int x, int y) { return magnitude.contains(x, y) ? magnitude(x, y) : 0.0; };
  RealImage out(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = magnitude(x, y);
      if (m <= 0.0) continue;
      int dx = 1, dy = 0;
      switch (orientation(x, y)) {
        case Orientation::deg0: dx = 1; dy = 0; break;
        case Orientation::deg45: dx = 1; dy = 1; break;
        case Orientation::deg90: dx = 0; dy = 1; break;
        case Orientation::deg135: dx = 1; dy = -1; break;
      }
      if (m >= at(x + dx, y + dy) && m >= at(x - dx, y - dy)) out(x, y) = m;
    }
  return out;
}

EdgeMap hysteresis(const RealImage& thinned, double low, double high) {
  if (!(low <= high)) throw ConfigError("hysteresis requires low <= high");
  const int w = thinned.width(), h = thinned.height();
  EdgeMap out(w, h);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (thinned(x, y) >= high && !out(x, y)) {
        out(x, y) = 1;
        stack.emplace_back(x, y);
        while (!stack.empty()) {
          const auto [cx, cy] = stack.back();
          stack.pop_back();
          for (int ny = cy - 1; ny <= cy + 1; ++ny)
            for (int nx = cx - 1; nx <= cx + 1; ++nx)
              if (thinned.contains(nx, ny) && !out(nx, ny) && thinned(nx, ny) >= low) {
                out(nx, ny) = 1;
                stack.emplace_back(nx, ny);
              }
        }
      }
  return out;
}

EdgeMap canny(const GrayImage& img, const CannyConfig& cfg) {
  cfg.validate();
  RealImage smoothed = gaussian_smooth(to_real(img), cfg.sigma);
  // 1/256 steps keep every later stage exact, so rotating or mirroring the
  // input rotates or mirrors the result bit for bit.
  for (auto& v : smoothed.pixels()) v = std::round(v * 256.0) / 256.0;
  const Gradients g = sobel_gradients(smoothed);
  RealImage thinned = non_max_suppress(g.magnitude, g.orientation);
  for (auto& v : thinned.pixels()) v *= cfg.gradient_scale;
  return hysteresis(thinned, cfg.low_threshold, cfg.high_threshold);
}

}  // namespace palmforge
