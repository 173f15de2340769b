#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "palmforge/raster.hpp"
#include "palmforge/rng.hpp"

namespace palmforge {

enum class Border : std::uint8_t { top = 0, bottom = 1, left = 2, right = 3 };
inline constexpr std::array<Border, 4> kBorders{Border::top, Border::bottom, Border::left,
                                                Border::right};
const char* border_name(Border b) noexcept;

struct BorderCut {
  bool applied = false;
  int depth = 0;
  friend bool operator==(const BorderCut&, const BorderCut&) = default;
};

struct CutoutSpec {
  std::array<BorderCut, 4> borders{};
  std::uint8_t fill = 0;

  const BorderCut& operator[](Border b) const { return borders[static_cast<std::size_t>(b)]; }
  BorderCut& operator[](Border b) { return borders[static_cast<std::size_t>(b)]; }

  /// Pixels covered by one border's strip (0 when not applied).
  std::size_t cut_area(Border b, int width, int height) const;
  friend bool operator==(const CutoutSpec&, const CutoutSpec&) = default;
};

/// Deepest strip along `b` whose area stays within a quarter of the image.
int max_cut_depth(Border b, int width, int height) noexcept;

struct CutoutConfig {
  bool enabled = true;
  double probability = 0.5;  ///< per border
  std::uint8_t fill = 0;

  void validate() const;
};

struct CutoutResult {
  GrayImage image;
  CutoutSpec spec;
};

/// Draws a CutoutSpec (per border: applied ~ Bernoulli(p), depth ~ U[1, max])
/// and applies it. Borders are drawn in top, bottom, left, right order.
CutoutResult border_cutout(const GrayImage& img, Rng& rng, const CutoutConfig& cfg = {});

CutoutSpec draw_cutout(int width, int height, Rng& rng, const CutoutConfig& cfg = {});
GrayImage apply_cutout(const GrayImage& img, const CutoutSpec& spec);

struct RangeAug {
  bool enabled = false;
  double min = 0.0;
  double max = 0.0;
};

struct MotionBlurAug {
  bool enabled = false;
  int min_length = 3;
  int max_length = 7;
};

struct BasicAugConfig {
  RangeAug brightness{false, -20.0, 20.0};  ///< additive intensity offset
  RangeAug contrast{false, 0.8, 1.2};       ///< gain about the image mean
  RangeAug rotation{false, -10.0, 10.0};    ///< degrees about the image centre
  MotionBlurAug motion_blur{};

  void validate() const;
};

/// Parameters actually drawn, for the manifest.
struct AugDraws {
  std::optional<double> brightness;
  std::optional<double> contrast;
  std::optional<double> rotation_deg;
  std::optional<int> blur_length;
  std::optional<double> blur_angle_deg;
  friend bool operator==(const AugDraws&, const AugDraws&) = default;
};

struct BasicAugResult {
  GrayImage image;
  AugDraws draws;
};

/// Enabled augmentations in fixed order: brightness, contrast, rotation,
/// motion blur.
BasicAugResult basic_augs(const GrayImage& img, Rng& rng, const BasicAugConfig& cfg = {});

GrayImage adjust_brightness(const GrayImage& img, double offset);
GrayImage adjust_contrast(const GrayImage& img, double gain);
/// Bilinear rotation about ((w-1)/2, (h-1)/2); uncovered pixels become 0.
/// Positive angles turn the content clockwise as displayed (y down).
GrayImage rotate(const GrayImage& img, double degrees);
/// Mean of `length` samples along a line at `angle_deg` through each pixel.
GrayImage motion_blur(const GrayImage& img, int length, double angle_deg);

}  // namespace palmforge
