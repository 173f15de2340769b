#pragma once

#include <cstdint>
#include <vector>

#include "palmforge/raster.hpp"

namespace palmforge {

struct CannyConfig {
  double sigma = 1.4;
  double high_threshold = 30.0;
  double low_threshold = 5.0;
  /// Thresholds apply to Sobel magnitude times this factor. 0.25 makes a full
  /// 0->255 step read as ~255, so thresholds are on the intensity scale.
  double gradient_scale = 0.25;

  void validate() const;
};

/// Normalized 1-D Gaussian taps, radius ceil(3*sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur; coordinates outside the raster clamp to the border.
RealImage gaussian_smooth(const RealImage& img, double sigma);

/// Gradient direction quantized to the four Canny bins (x right, y down).
enum class Orientation : std::uint8_t { deg0 = 0, deg45 = 1, deg90 = 2, deg135 = 3 };

Orientation quantize_orientation(double gx, double gy) noexcept;

struct Gradients {
  RealImage magnitude;
  Raster<Orientation> orientation;
};

/// Unnormalized 3x3 Sobel. The 1-px border gets zero magnitude.
Gradients sobel_gradients(const RealImage& img);

/// Keeps a pixel iff its magnitude is >= both neighbours along its gradient
/// direction (neighbours outside the raster count as 0).
RealImage non_max_suppress(const RealImage& magnitude, const Raster<Orientation>& orientation);

/// Strong pixels (>= high) seed an 8-connected flood over pixels >= low.
EdgeMap hysteresis(const RealImage& thinned, double low, double high);

EdgeMap canny(const GrayImage& img, const CannyConfig& cfg = {});

}  // namespace palmforge
