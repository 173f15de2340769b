#pragma once

#include <array>
#include <span>

#include "palmforge/raster.hpp"

namespace palmforge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline constexpr int kHandKeyPointCount = 21;

/// 21 landmarks of the standard hand topology, in source-image pixels.
class HandKeyPoints {
 public:
  /// Throws GeometryError if any coordinate is not finite.
  explicit HandKeyPoints(std::array<Point2, kHandKeyPointCount> points);

  const Point2& operator[](int i) const { return points_.at(static_cast<std::size_t>(i)); }
  std::span<const Point2, kHandKeyPointCount> points() const noexcept { return points_; }

 private:
  std::array<Point2, kHandKeyPointCount> points_;
};

/// dst = linear * src + translation.
struct AffineTransform {
  std::array<double, 4> linear{1.0, 0.0, 0.0, 1.0};  // row-major a00 a01 a10 a11
  std::array<double, 2> translation{0.0, 0.0};

  static AffineTransform identity() { return {}; }

  Point2 apply(Point2 p) const noexcept {
    return {linear[0] * p.x + linear[1] * p.y + translation[0],
            linear[2] * p.x + linear[3] * p.y + translation[1]};
  }
  double determinant() const noexcept { return linear[0] * linear[3] - linear[1] * linear[2]; }

  /// Throws GeometryError when the linear part is singular.
  AffineTransform inverse() const;
};

/// Composes a rotation (degrees, counter-clockwise in x-right/y-down pixel
/// coordinates), uniform scale and translation.
AffineTransform similarity(double rotation_deg, double scale, Point2 translation);

struct AlignmentConfig {
  /// MCP joints of index, middle, ring and pinky fingers.
  std::array<int, 4> reference_joints{5, 9, 13, 17};
  /// Where the reference joints land in the 256x256 frame: a shallow arc
  /// across the top, leaving the fingers above and the palm below.
  std::array<Point2, 4> targets{{{64.0, 62.0}, {106.0, 54.0}, {150.0, 54.0}, {192.0, 66.0}}};

  /// Throws ConfigError on out-of-range or repeated joint indices.
  void validate() const;
};

/// Least-squares affine mapping `sources[i]` onto `targets[i]`.
/// Throws GeometryError if the sources are collinear or the fitted map is singular.
AffineTransform fit_affine(std::span<const Point2> sources, std::span<const Point2> targets);

/// Least-squares affine taking the configured reference joints of `kp` to the
/// configured targets.
AffineTransform estimate_affine(const HandKeyPoints& kp, const AlignmentConfig& cfg = {});

/// Bilinear sample with zero outside the raster.
double sample_bilinear(const GrayImage& src, double x, double y) noexcept;

/// Resamples `src` into a 256x256 frame by inverse mapping through `t`.
GrayImage warp(const GrayImage& src, const AffineTransform& t, int out_size = kFrameSize);

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(int px, int py) const noexcept {
    return px >= x && py >= y && px < x + width && py < y + height;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct RoiConfig {
  Rect roi{63, 63, 129, 129};
};

/// The ROI and its 3x3 blocks, numbered 1..9 row-major (blocks[0] is block 1).
struct RoiGrid {
  Rect roi;
  std::array<Rect, 9> blocks;

  const Rect& block(int number) const { return blocks.at(static_cast<std::size_t>(number - 1)); }
  /// 1..9 for pixels inside the ROI, 0 outside.
  int block_at(int x, int y) const noexcept;
};

/// Throws ConfigError unless the ROI lies in the frame and both sides are
/// positive multiples of 3.
RoiGrid roi_grid(const RoiConfig& cfg = {});

}  // namespace palmforge
