#pragma once

// Brute-force reference implementations. Each one is written directly from
// the definition and shares no code path with the library routine it checks.

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "palmforge/assembler.hpp"
#include "palmforge/raster.hpp"

namespace oracle {

using palmforge::EdgeMap;
using palmforge::GrayImage;
using palmforge::RealImage;

/// Hysteresis by repeated full sweeps until nothing changes.
inline EdgeMap hysteresis_fixpoint(const RealImage& m, double low, double high) {
  EdgeMap out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) out(x, y) = m(x, y) >= high ? 1 : 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) {
        if (out(x, y) || m(x, y) < low) continue;
        for (int dy = -1; dy <= 1 && !out(x, y); ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if ((dx || dy) && m.contains(nx, ny) && out(nx, ny)) {
              out(x, y) = 1;
              changed = true;
              break;
            }
          }
      }
  }
  return out;
}

/// Expected output of warping `src` by a pure translation (tx, ty): every
/// destination pixel reads the four source pixels around (x - tx, y - ty).
inline GrayImage translate_reference(const GrayImage& src, double tx, double ty, int size) {
  GrayImage out(size, size);
  const double fx = -tx - std::floor(-tx), fy = -ty - std::floor(-ty);
  const int ox = static_cast<int>(std::floor(-tx)), oy = static_cast<int>(std::floor(-ty));
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double v = 0.0;
      const double w[2][2] = {{(1 - fx) * (1 - fy), fx * (1 - fy)}, {(1 - fx) * fy, fx * fy}};
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
          const int sx = x + ox + i, sy = y + oy + j;
          if (src.contains(sx, sy)) v += w[j][i] * src(sx, sy);
        }
      out(x, y) = static_cast<std::uint8_t>(std::lround(v));
    }
  return out;
}

/// Per-pixel provenance: which (identity, gesture) pixel the assembled map
/// must contain at (x, y).
inline std::uint8_t provenance_pixel(const palmforge::AssemblySpec& spec,
                                     const palmforge::EdgeLibrary& lib,
                                     const palmforge::RoiGrid& grid, int x, int y) {
  const int sx = spec.flip ? palmforge::kFrameSize - 1 - x : x;
  for (int j = 1; j <= 9; ++j) {
    const auto& b = grid.blocks[static_cast<std::size_t>(j - 1)];
    if (sx >= b.x && sx < b.x + b.width && y >= b.y && y < b.y + b.height) {
      const auto src = spec.block_source(j);
      return lib.at(src.identity, src.gesture)(sx, y);
    }
  }
  return lib.at(spec.background.identity, spec.background.gesture)(sx, y);
}

/// Quarter-turn counter-clockwise rotation by index mapping (square images).
inline GrayImage rotate90_reference(const GrayImage& img) {
  const int n = img.width();
  GrayImage out(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) out(y, n - 1 - x) = img(x, y);
  return out;
}

template <typename T>
palmforge::Raster<T> rotate90(const palmforge::Raster<T>& img) {
  const int n = img.width();
  palmforge::Raster<T> out(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) out(y, n - 1 - x) = img(x, y);
  return out;
}

template <typename T>
palmforge::Raster<T> transpose(const palmforge::Raster<T>& img) {
  palmforge::Raster<T> out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
  return out;
}

/// C(n, k) from Pascal's triangle.
inline std::uint64_t pascal(int n, int k) {
  std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    t[i].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t[n][k];
}

/// Greedy first-fit over lexicographic subsets using std::set intersections.
inline std::vector<std::vector<int>> greedy_sets(int n, int m, int k) {
  std::vector<std::vector<int>> accepted;
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[i] = i;
  for (;;) {
    bool ok = true;
    const std::set<int> cand(idx.begin(), idx.end());
    for (const auto& a : accepted) {
      int shared = 0;
      for (int v : a) shared += static_cast<int>(cand.count(v));
      if (shared > k) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(idx);
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return accepted;
}

}  // namespace oracle
