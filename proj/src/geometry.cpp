#include "palmforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace palmforge {

HandKeyPoints::HandKeyPoints(std::array<Point2, kHandKeyPointCount> points) : points_(points) {
  for (const auto& p : points_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw GeometryError("hand key-point coordinates must be finite");
}

AffineTransform AffineTransform::inverse() const {
  const double det = determinant();
  const double scale = std::abs(linear[0]) + std::abs(linear[1]) + std::abs(linear[2]) +
                       std::abs(linear[3]);
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * scale * scale)
    throw GeometryError("affine transform is not invertible");
  AffineTransform inv;
  inv.linear = {linear[3] / det, -linear[1] / det, -linear[2] / det, linear[0] / det};
  inv.translation = {-(inv.linear[0] * translation[0] + inv.linear[1] * translation[1]),
                     -(inv.linear[2] * translation[0] + inv.linear[3] * translation[1])};
  return inv;
}

AffineTransform similarity(double rotation_deg, double scale, Point2 translation) {
  const double r = rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(r) * scale;
  const double s = std::sin(r) * scale;
  AffineTransform t;
  t.linear = {c, -s, s, c};
  t.translation = {translation.x, translation.y};
  return t;
}

void AlignmentConfig::validate() const {
  for (std::size_t i = 0; i < reference_joints.size(); ++i) {
    const int j = reference_joints[i];
    if (j < 0 || j >= kHandKeyPointCount)
      throw ConfigError("reference joint index " + std::to_string(j) + " out of range [0,21)");
    for (std::size_t k = 0; k < i; ++k)
      if (reference_joints[k] == j) throw ConfigError("reference joint indices must be distinct");
  }
  for (const auto& p : targets)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ConfigError("alignment targets must be finite");
}

AffineTransform fit_affine(std::span<const Point2> sources, std::span<const Point2> targets) {
  if (sources.size() != targets.size() || sources.size() < 3)
    throw GeometryError("affine fit needs at least 3 point pairs of equal count");
  const double n = static_cast<double>(sources.size());
  Point2 cs, ct;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    cs.x += sources[i].x / n;
    cs.y += sources[i].y / n;
    ct.x += targets[i].x / n;
    ct.y += targets[i].y / n;
  }
  // Centered normal equations: A = C * S^-1 with S = sum dp dp^T, C = sum dq dp^T.
  double sxx = 0, sxy = 0, syy = 0;
  double cxx = 0, cxy = 0, cyx = 0, cyy = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double px = sources[i].x - cs.x, py = sources[i].y - cs.y;
    const double qx = targets[i].x - ct.x, qy = targets[i].y - ct.y;
    sxx += px * px;
    sxy += px * py;
    syy += py * py;
    cxx += qx * px;
    cxy += qx * py;
    cyx += qy * px;
    cyy += qy * py;
  }
  const double det = sxx * syy - sxy * sxy;
  const double tr = sxx + syy;
  if (!(tr > 0.0) || det <= 1e-10 * tr * tr)
    throw GeometryError("reference joints are collinear; affine fit is degenerate");

  const double i00 = syy / det, i01 = -sxy / det, i11 = sxx / det;
  AffineTransform t;
  t.linear = {cxx * i00 + cxy * i01, cxx * i01 + cxy * i11,
              cyx * i00 + cyy * i01, cyx * i01 + cyy * i11};
  t.translation = {ct.x - (t.linear[0] * cs.x + t.linear[1] * cs.y),
                   ct.y - (t.linear[2] * cs.x + t.linear[3] * cs.y)};
  (void)t.inverse();  // rejects fits whose linear part collapsed
  return t;
}

AffineTransform estimate_affine(const HandKeyPoints& kp, const AlignmentConfig& cfg) {
  cfg.validate();
  std::array<Point2, 4> joints;
  for (std::size_t i = 0; i < joints.size(); ++i) joints[i] = kp[cfg.reference_joints[i]];
  return fit_affine(joints, cfg.targets);
}

double sample_bilinear(const GrayImage& src, double x, double y) noexcept {
  const double fx0 = std::floor(x), fy0 = std::floor(y);
  if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= src.width() || fy0 >= src.height()) return 0.0;
  const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
  const double fx = x - fx0, fy = y - fy0;
  auto at = [&](int px, int py) -> double {
    return src.contains(px, py) ? static_cast<double>(src(px, py)) : 0.0;
  };
  double v = (1.0 - fx) * (1.0 - fy) * at(x0, y0);
  if (fx != 0.0) v += fx * (1.0 - fy) * at(x0 + 1, y0);
  if (fy != 0.0) v += (1.0 - fx) * fy * at(x0, y0 + 1);
  if (fx != 0.0 && fy != 0.0) v += fx * fy * at(x0 + 1, y0 + 1);
  return v;
}

GrayImage warp(const GrayImage& src, const AffineTransform& t, int out_size) {
  const AffineTransform inv = t.inverse();
  GrayImage out(out_size, out_size);
  for (int y = 0; y < out_size; ++y) {
    for (int x = 0; x < out_size; ++x) {
      const Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
      const double v = sample_bilinear(src, s.x, s.y);
      out(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

int RoiGrid::block_at(int x, int y) const noexcept {
  if (!roi.contains(x, y)) return 0;
  const int col = (x - roi.x) / (roi.width / 3);
  const int row = (y - roi.y) / (roi.height / 3);
  return row * 3 + col + 1;
}

RoiGrid roi_grid(const RoiConfig& cfg) {
  const Rect& r = cfg.roi;
  if (r.width <= 0 || r.height <= 0 || r.width % 3 != 0 || r.height % 3 != 0)
    throw ConfigError("ROI sides must be positive multiples of 3 (got " +
                      std::to_string(r.width) + "x" + std::to_string(r.height) + ")");
  if (r.x < 0 || r.y < 0 || r.x + r.width > kFrameSize || r.y + r.height > kFrameSize)
    throw ConfigError("ROI must lie inside the 256x256 frame");
  RoiGrid grid;
  grid.roi = r;
  const int bw = r.width / 3, bh = r.height / 3;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      grid.blocks[static_cast<std::size_t>(row * 3 + col)] = Rect{r.x + col * bw, r.y + row * bh, bw, bh};
  return grid;
}

}  // namespace palmforge
