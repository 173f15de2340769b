#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "palmforge/augment.hpp"

using namespace palmforge;

namespace {

GrayImage noise(std::uint64_t seed, int w = kFrameSize, int h = kFrameSize) {
  std::mt19937_64 rng(seed);
  GrayImage img(w, h);
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(1 + rng() % 255);
  return img;
}

bool in_strip(const CutoutSpec& s, int x, int y, int w, int h) {
  return (s[Border::top].applied && y < s[Border::top].depth) ||
         (s[Border::bottom].applied && y >= h - s[Border::bottom].depth) ||
         (s[Border::left].applied && x < s[Border::left].depth) ||
         (s[Border::right].applied && x >= w - s[Border::right].depth);
}

}  // namespace

TEST_CASE("max_cut_depth keeps each strip within a quarter of the image") {
  CHECK(max_cut_depth(Border::top, 256, 256) == 64);
  CHECK(max_cut_depth(Border::left, 256, 256) == 64);
  CHECK(max_cut_depth(Border::top, 300, 200) == 50);
  CHECK(max_cut_depth(Border::left, 300, 200) == 75);
  CHECK(max_cut_depth(Border::top, 3, 3) == 0);
}

TEST_CASE("cutout disabled or p=0 leaves the image unchanged") {
  const GrayImage img = noise(1);
  Rng rng(3);
  CutoutConfig off;
  off.enabled = false;
  const auto a = border_cutout(img, rng, off);
  CHECK(a.image == img);
  for (auto b : kBorders) CHECK_FALSE(a.spec[b].applied);
  CutoutConfig never;
  never.probability = 0.0;
  CHECK(border_cutout(img, rng, never).image == img);
}

TEST_CASE("top cut of depth 64 zeroes exactly 16384 pixels") {
  const GrayImage img = noise(2);
  CutoutSpec spec;
  spec[Border::top] = {true, 64};
  const GrayImage out = apply_cutout(img, spec);
  std::size_t zeros = 0;
  for (auto v : out.pixels()) zeros += v == 0;
  CHECK(zeros == 16384);
  CHECK(spec.cut_area(Border::top, 256, 256) == 16384);
  for (int x = 0; x < 256; ++x) {
    CHECK(out(x, 63) == 0);
    CHECK(out(x, 64) == img(x, 64));
  }
}

TEST_CASE("apply_cutout rejects depths beyond the quarter bound") {
  CutoutSpec spec;
  spec[Border::right] = {true, 65};
  CHECK_THROWS_AS(apply_cutout(noise(3), spec), ConfigError);
}

TEST_CASE("property: drawn cutouts respect bounds and preserve every other pixel") {
  Rng rng(11);
  const GrayImage img = noise(4);
  CutoutConfig cfg;
  cfg.fill = 0;
  int applied[4] = {};
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = border_cutout(img, rng, cfg);
    for (auto b : kBorders) {
      const auto& cut = r.spec[b];
      if (!cut.applied) continue;
      ++applied[static_cast<int>(b)];
      REQUIRE(cut.depth >= 1);
      REQUIRE(cut.depth <= 64);
      REQUIRE(r.spec.cut_area(b, 256, 256) * 4 <= 256u * 256u);
    }
    for (int y = 0; y < 256; ++y)
      for (int x = 0; x < 256; ++x)
        REQUIRE(r.image(x, y) == (in_strip(r.spec, x, y, 256, 256) ? 0 : img(x, y)));
  }
  for (int n : applied) {
    CHECK(n > 100);
    CHECK(n < 200);
  }
}

TEST_CASE("cutout is deterministic for a seed") {
  const GrayImage img = noise(5);
  Rng a(77), b(77);
  const auto ra = border_cutout(img, a), rb = border_cutout(img, b);
  CHECK(ra.spec == rb.spec);
  CHECK(ra.image == rb.image);
}

TEST_CASE("custom fill value") {
  CutoutSpec spec;
  spec.fill = 9;
  spec[Border::left] = {true, 2};
  const GrayImage out = apply_cutout(GrayImage(10, 10, 100), spec);
  CHECK(out(0, 5) == 9);
  CHECK(out(1, 5) == 9);
  CHECK(out(2, 5) == 100);
}

TEST_CASE("brightness and contrast") {
  const GrayImage img = noise(6, 32, 32);
  const GrayImage bright = adjust_brightness(img, 20.0);
  for (std::size_t i = 0; i < img.size(); ++i)
    REQUIRE(bright.pixels()[i] == std::min(255, img.pixels()[i] + 20));
  CHECK(adjust_contrast(img, 1.0) == img);
  const GrayImage flat(16, 16, 90);
  CHECK(adjust_contrast(flat, 1.7) == flat);
  CHECK(adjust_brightness(img, 0.0) == img);
}

TEST_CASE("rotation by quarter turns matches index remapping") {
  const GrayImage img = noise(7, 64, 64);
  CHECK(rotate(img, 0.0) == img);
  CHECK(rotate(img, -90.0) == oracle::rotate90_reference(img));
  CHECK(rotate(img, 90.0) == oracle::rotate90(oracle::rotate90(oracle::rotate90(img))));
  CHECK(rotate(img, 180.0) == oracle::rotate90(oracle::rotate90(img)));
}

TEST_CASE("motion blur: length 1 is identity, constant image unchanged") {
  const GrayImage img = noise(8, 40, 40);
  CHECK(motion_blur(img, 1, 30.0) == img);
  const GrayImage flat(20, 20, 123);
  CHECK(motion_blur(flat, 7, 33.0) == flat);
  CHECK_THROWS_AS(motion_blur(img, 0, 0.0), ConfigError);
}

TEST_CASE("motion blur along x averages horizontal neighbours") {
  GrayImage img(9, 3, 0);
  for (int y = 0; y < 3; ++y) img(4, y) = 90;
  const GrayImage out = motion_blur(img, 3, 0.0);
  CHECK(out(3, 1) == 30);
  CHECK(out(4, 1) == 30);
  CHECK(out(5, 1) == 30);
  CHECK(out(2, 1) == 0);
}

TEST_CASE("basic_augs: all disabled is a no-op with no draws") {
  const GrayImage img = noise(9, 50, 50);
  Rng rng(1);
  const auto r = basic_augs(img, rng);
  CHECK(r.image == img);
  CHECK(r.draws == AugDraws{});
}

TEST_CASE("basic_augs: draws within ranges, deterministic per seed") {
  BasicAugConfig cfg;
  cfg.brightness.enabled = true;
  cfg.contrast.enabled = true;
  cfg.rotation.enabled = true;
  cfg.motion_blur.enabled = true;
  const GrayImage img = noise(10, 64, 64);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    const auto ra = basic_augs(img, a, cfg), rb = basic_augs(img, b, cfg);
    CHECK(ra.image == rb.image);
    CHECK(ra.draws == rb.draws);
    REQUIRE(ra.draws.brightness);
    CHECK(*ra.draws.brightness >= -20.0);
    CHECK(*ra.draws.brightness <= 20.0);
    CHECK(*ra.draws.contrast >= 0.8);
    CHECK(*ra.draws.contrast <= 1.2);
    CHECK(std::abs(*ra.draws.rotation_deg) <= 10.0);
    CHECK(*ra.draws.blur_length >= 3);
    CHECK(*ra.draws.blur_length <= 7);
  }
  cfg.contrast.min = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
