#include "palmforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "palmforge/geometry.hpp"

namespace palmforge {

const char* border_name(Border b) noexcept {
  switch (b) {
    case Border::top: return "top";
    case Border::bottom: return "bottom";
    case Border::left: return "left";
    case Border::right: return "right";
  }
  return "?";
}

int max_cut_depth(Border b, int width, int height) noexcept {
  const long long quarter = static_cast<long long>(width) * height / 4;
  const int side = (b == Border::top || b == Border::bottom) ? width : height;
  return side > 0 ? static_cast<int>(quarter / side) : 0;
}

std::size_t CutoutSpec::cut_area(Border b, int width, int height) const {
  const BorderCut& c = (*this)[b];
  if (!c.applied) return 0;
  const int side = (b == Border::top || b == Border::bottom) ? width : height;
  return static_cast<std::size_t>(c.depth) * static_cast<std::size_t>(side);
}

void CutoutConfig::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw ConfigError("cutout probability must be in [0,1]");
}

CutoutSpec draw_cutout(int width, int height, Rng& rng, const CutoutConfig& cfg) {
  cfg.validate();
  CutoutSpec spec;
  spec.fill = cfg.fill;
  if (!cfg.enabled) return spec;
  for (Border b : kBorders) {
    BorderCut& cut = spec[b];
    cut.applied = std::bernoulli_distribution(cfg.probability)(rng);
    const int hi = max_cut_depth(b, width, height);
    if (cut.applied && hi >= 1) {
      cut.depth = std::uniform_int_distribution<int>(1, hi)(rng);
    } else {
      cut = {};
    }
  }
  return spec;
}

GrayImage apply_cutout(const GrayImage& img, const CutoutSpec& spec) {
  GrayImage out = img;
  const int w = img.width(), h = img.height();
  for (Border b : kBorders) {
    const BorderCut& c = spec[b];
    if (!c.applied) continue;
    if (c.depth < 0 || c.depth > max_cut_depth(b, w, h))
      throw ConfigError(std::string("cutout depth on ") + border_name(b) + " exceeds a quarter of the image");
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const bool hit = (b == Border::top && y < c.depth) ||
                         (b == Border::bottom && y >= h - c.depth) ||
                         (b == Border::left && x < c.depth) ||
                         (b == Border::right && x >= w - c.depth);
        if (hit) out(x, y) = spec.fill;
      }
  }
  return out;
}

CutoutResult border_cutout(const GrayImage& img, Rng& rng, const CutoutConfig& cfg) {
  CutoutSpec spec = draw_cutout(img.width(), img.height(), rng, cfg);
  return {apply_cutout(img, spec), spec};
}

void BasicAugConfig::validate() const {
  for (const RangeAug* r : {&brightness, &contrast, &rotation})
    if (r->enabled && !(r->min <= r->max)) throw ConfigError("augmentation range needs min <= max");
  if (contrast.enabled && contrast.min < 0.0) throw ConfigError("contrast gain must be >= 0");
  if (motion_blur.enabled &&
      (motion_blur.min_length < 1 || motion_blur.min_length > motion_blur.max_length))
    throw ConfigError("motion blur lengths need 1 <= min <= max");
}

namespace {

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double draw(const RangeAug& r, Rng& rng) {
  return r.min == r.max ? r.min : std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

// Snaps values within rounding noise of 0 or +-1, so quarter turns are exact.
double snap(double v) {
  for (double t : {0.0, 1.0, -1.0})
    if (std::abs(v - t) < 1e-12) return t;
  return v;
}

}  // namespace

GrayImage adjust_brightness(const GrayImage& img, double offset) {
  GrayImage out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.pixels().begin(),
                         [&](std::uint8_t v) { return clamp_byte(v + offset); });
  return out;
}

GrayImage adjust_contrast(const GrayImage& img, double gain) {
  if (img.empty()) return img;
  const double mean =
      std::accumulate(img.pixels().begin(), img.pixels().end(), 0.0) / static_cast<double>(img.size());
  GrayImage out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.pixels().begin(),
                         [&](std::uint8_t v) { return clamp_byte((v - mean) * gain + mean); });
  return out;
}

GrayImage rotate(const GrayImage& img, double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double c = snap(std::cos(r)), s = snap(std::sin(r));
  const double cx = (img.width() - 1) / 2.0, cy = (img.height() - 1) / 2.0;
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      // Inverse rotation of the destination pixel.
      const double dx = x - cx, dy = y - cy;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      out(x, y) = clamp_byte(sample_bilinear(img, sx, sy));
    }
  return out;
}

GrayImage motion_blur(const GrayImage& img, int length, double angle_deg) {
  if (length < 1) throw ConfigError("motion blur length must be >= 1");
  if (length == 1 || img.empty()) return img;
  const double r = angle_deg * std::numbers::pi / 180.0;
  const double ux = snap(std::cos(r)), uy = snap(std::sin(r));
  const double half = (length - 1) / 2.0;
  const int w = img.width(), h = img.height();
  auto at = [&](int x, int y) -> double {
    return img(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = 0; i < length; ++i) {
        const double t = i - half;
        const double sx = x + t * ux, sy = y + t * uy;
        const double fx0 = std::floor(sx), fy0 = std::floor(sy);
        const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
        const double fx = sx - fx0, fy = sy - fy0;
        acc += (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x0 + 1, y0) +
               (1 - fx) * fy * at(x0, y0 + 1) + fx * fy * at(x0 + 1, y0 + 1);
      }
      out(x, y) = clamp_byte(acc / length);
    }
  return out;
}

BasicAugResult basic_augs(const GrayImage& img, Rng& rng, const BasicAugConfig& cfg) {
  cfg.validate();
  BasicAugResult res{img, {}};
  if (cfg.brightness.enabled) {
    res.draws.brightness = draw(cfg.brightness, rng);
    res.image = adjust_brightness(res.image, *res.draws.brightness);
  }
  if (cfg.contrast.enabled) {
    res.draws.contrast = draw(cfg.contrast, rng);
    res.image = adjust_contrast(res.image, *res.draws.contrast);
  }
  if (cfg.rotation.enabled) {
    res.draws.rotation_deg = draw(cfg.rotation, rng);
    res.image = rotate(res.image, *res.draws.rotation_deg);
  }
  if (cfg.motion_blur.enabled) {
    res.draws.blur_length = std::uniform_int_distribution<int>(cfg.motion_blur.min_length,
                                                               cfg.motion_blur.max_length)(rng);
    res.draws.blur_angle_deg = std::uniform_real_distribution<double>(0.0, 180.0)(rng);
    res.image = motion_blur(res.image, *res.draws.blur_length, *res.draws.blur_angle_deg);
  }
  return res;
}

}  // namespace palmforge
