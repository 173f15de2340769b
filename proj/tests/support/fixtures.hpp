#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "palmforge/assembler.hpp"
#include "palmforge/raster.hpp"

namespace testsupport {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("palmforge_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

/// Random 256x256 binary map with the given edge density.
inline palmforge::EdgeMap random_edge(std::mt19937_64& rng, double density = 0.1) {
  palmforge::EdgeMap e(palmforge::kFrameSize, palmforge::kFrameSize);
  std::bernoulli_distribution bit(density);
  for (auto& v : e.bits.pixels()) v = bit(rng) ? 1 : 0;
  return e;
}

/// Library of `identities` x `gestures` random edge maps; every map differs.
inline palmforge::EdgeLibrary random_library(int identities, int gestures, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  palmforge::EdgeLibrary lib;
  for (int id = 0; id < identities; ++id) {
    std::vector<palmforge::EdgeMap> maps;
    for (int g = 0; g < gestures; ++g) maps.push_back(random_edge(rng));
    lib.add_identity(id, std::move(maps));
  }
  return lib;
}

/// Filled disk of `radius` around (cx, cy); pixel centres with d <= r are inside.
inline palmforge::GrayImage disk_image(int size, double cx, double cy, double radius,
                                       std::uint8_t inside = 255, std::uint8_t outside = 0) {
  palmforge::GrayImage img(size, size, outside);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if (std::hypot(x - cx, y - cy) <= radius) img(x, y) = inside;
  return img;
}

/// Disk rendered with area coverage (16x16 subsamples per pixel), so the
/// boundary sits at a sub-pixel position instead of between two pixel rows.
inline palmforge::GrayImage antialiased_disk(int size, double cx, double cy, double radius) {
  constexpr int kSub = 16;
  palmforge::GrayImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      int inside = 0;
      for (int j = 0; j < kSub; ++j)
        for (int i = 0; i < kSub; ++i) {
          const double px = x - 0.5 + (i + 0.5) / kSub, py = y - 0.5 + (j + 0.5) / kSub;
          inside += std::hypot(px - cx, py - cy) <= radius;
        }
      img(x, y) = static_cast<std::uint8_t>(std::lround(255.0 * inside / (kSub * kSub)));
    }
  return img;
}

}  // namespace testsupport
