#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "palmforge/assembler.hpp"
#include "palmforge/png_io.hpp"

using namespace palmforge;

namespace {

AssemblySpec random_spec(std::mt19937_64& rng, int identities, int gestures) {
  std::vector<int> ids(static_cast<std::size_t>(identities));
  for (int i = 0; i < identities; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(9);
  std::sort(ids.begin(), ids.end());
  AssemblySpec spec;
  spec.combination = rotation(IdentitySubset(ids), static_cast<int>(rng() % 9));
  for (auto& g : spec.block_source_gesture) g = static_cast<int>(rng() % gestures);
  spec.background = {static_cast<int>(rng() % identities), static_cast<int>(rng() % gestures)};
  spec.flip = rng() & 1;
  return spec;
}

}  // namespace

TEST_CASE("EdgeLibrary validates inputs and lookups") {
  EdgeLibrary lib;
  CHECK_THROWS_AS(lib.add_identity(0, {}), ConfigError);
  CHECK_THROWS_AS(lib.add_identity(0, {EdgeMap(128, 128)}), ConfigError);
  EdgeMap bad(kFrameSize, kFrameSize);
  bad(3, 3) = 2;
  CHECK_THROWS_AS(lib.add_identity(0, {bad}), ConfigError);
  lib.add_identity(4, {EdgeMap(kFrameSize, kFrameSize)});
  CHECK(lib.gesture_count(4) == 1);
  CHECK_THROWS_AS(lib.at(4, 1), LookupError);
  CHECK_THROWS_AS(lib.at(5, 0), LookupError);
  CHECK_THROWS_AS(lib.gesture_count(5), LookupError);
}

TEST_CASE("EdgeLibrary::load reads the on-disk layout") {
  testsupport::TempDir dir("lib");
  const auto lib = testsupport::random_library(3, 2, 11);
  for (int id = 0; id < 3; ++id)
    for (int g = 0; g < 2; ++g)
      write_png_edge(dir / (std::to_string(id) + "/" + std::to_string(g) + ".png"), lib.at(id, g));
  const auto loaded = EdgeLibrary::load(dir.path());
  CHECK(loaded.identity_count() == 3);
  for (int id = 0; id < 3; ++id)
    for (int g = 0; g < 2; ++g) CHECK(loaded.at(id, g) == lib.at(id, g));
  testsupport::TempDir empty("empty");
  CHECK_THROWS_AS(EdgeLibrary::load(empty.path()), IoError);
}

TEST_CASE("assembling one identity onto itself reproduces its map") {
  const auto lib = testsupport::random_library(1, 3, 2);
  const auto grid = roi_grid({});
  AssemblySpec spec;
  for (int j = 1; j <= 9; ++j) spec.combination.slots[static_cast<std::size_t>(j - 1)] = {0, j};
  spec.block_source_gesture.fill(2);
  spec.background = {0, 2};
  CHECK(assemble_edge(spec, lib, grid) == lib.at(0, 2));
  spec.flip = true;
  CHECK(assemble_edge(spec, lib, grid) == mirror_horizontal(lib.at(0, 2)));
}

TEST_CASE("property: every assembled pixel matches its provenance") {
  const auto lib = testsupport::random_library(12, 3, 5);
  std::mt19937_64 rng(6);
  for (const RoiConfig roi : {RoiConfig{}, RoiConfig{{30, 50, 150, 120}}}) {
    const auto grid = roi_grid(roi);
    for (int trial = 0; trial < 10; ++trial) {
      const auto spec = random_spec(rng, 12, 3);
      const EdgeMap out = assemble_edge(spec, lib, grid);
      for (int y = 0; y < kFrameSize; ++y)
        for (int x = 0; x < kFrameSize; ++x)
          REQUIRE(out(x, y) == oracle::provenance_pixel(spec, lib, grid, x, y));
    }
  }
}

TEST_CASE("flipping twice restores the unflipped map") {
  const auto lib = testsupport::random_library(9, 1, 8);
  std::mt19937_64 rng(1);
  auto spec = random_spec(rng, 9, 1);
  spec.flip = false;
  const EdgeMap plain = assemble_edge(spec, lib, roi_grid({}));
  spec.flip = true;
  const EdgeMap flipped = assemble_edge(spec, lib, roi_grid({}));
  CHECK(mirror_horizontal(flipped) == plain);
}

TEST_CASE("assemble rejects a block at the wrong position and unknown sources") {
  const auto lib = testsupport::random_library(9, 1, 8);
  std::mt19937_64 rng(2);
  auto spec = random_spec(rng, 9, 1);
  spec.combination.slots[0].block = 2;
  CHECK_THROWS_AS(assemble_edge(spec, lib, roi_grid({})), ConfigError);
  spec = random_spec(rng, 9, 1);
  spec.block_source_gesture[4] = 1;
  CHECK_THROWS_AS(assemble_edge(spec, lib, roi_grid({})), LookupError);
}

TEST_CASE("ROI content is identical across variants of one combination") {
  const auto lib = testsupport::random_library(9, 5, 13);
  const auto grid = roi_grid({});
  const Combination c = rotation(IdentitySubset({0, 1, 2, 3, 4, 5, 6, 7, 8}), 4);
  Rng rng(99);
  const auto specs = sample_variants(c, lib, 5, rng);
  REQUIRE(specs.size() == 5);
  std::vector<EdgeMap> maps;
  for (const auto& s : specs) maps.push_back(assemble_edge(s, lib, grid));
  const Rect& r = grid.roi;
  for (std::size_t i = 1; i < maps.size(); ++i)
    for (int y = r.y; y < r.y + r.height; ++y)
      for (int x = r.x; x < r.x + r.width; ++x) {
        const int fx = specs[0].flip ? kFrameSize - 1 - x : x;
        REQUIRE(maps[i](fx, y) == maps[0](fx, y));
      }
}

TEST_CASE("sample_variants: shared flip, donor backgrounds cycling through gestures") {
  const auto lib = testsupport::random_library(9, 3, 13);
  const Combination c = rotation(IdentitySubset({0, 1, 2, 3, 4, 5, 6, 7, 8}), 2);
  Rng rng(5);
  const auto one = sample_variants(c, lib, 1, rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0].background == SourceRef{c.at_position(1).identity, 0});

  const auto specs = sample_variants(c, lib, 7, rng);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(specs[i].flip == specs[0].flip);
    CHECK(specs[i].combination == c);
    CHECK(specs[i].background == SourceRef{2, static_cast<int>(i % 3)});
    for (int g : specs[i].block_source_gesture) CHECK(g == 0);
  }
  Rng a(17), b(17);
  CHECK(sample_variants(c, lib, 4, a) == sample_variants(c, lib, 4, b));
  CHECK_THROWS_AS(sample_variants(c, lib, 0, rng), ConfigError);
  CHECK_THROWS_AS(sample_variants(c, lib, 2, rng, {5, 1, 0.5}), LookupError);
  CHECK_THROWS_AS(sample_variants(c, lib, 2, rng, {0, 10, 0.5}), ConfigError);
}

TEST_CASE("sample_variants: flip probability extremes") {
  const auto lib = testsupport::random_library(9, 1, 1);
  const Combination c = rotation(IdentitySubset({0, 1, 2, 3, 4, 5, 6, 7, 8}), 0);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    CHECK_FALSE(sample_variants(c, lib, 1, rng, {0, 1, 0.0})[0].flip);
    CHECK(sample_variants(c, lib, 1, rng, {0, 1, 1.0})[0].flip);
  }
}
