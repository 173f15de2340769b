#include <doctest.h>

#include <fstream>
#include <random>

#include "echo_stub.hpp"
#include "fixtures.hpp"
#include "palmforge/png_io.hpp"
#include "palmforge/renderer.hpp"

#include <json.hpp>

using namespace palmforge;

namespace {

std::vector<RenderRequest> random_requests(int count, std::uint64_t seed, const std::string& prefix = "r") {
  std::mt19937_64 rng(seed);
  std::vector<RenderRequest> reqs;
  for (int i = 0; i < count; ++i) reqs.push_back({prefix + std::to_string(i), testsupport::random_edge(rng), {}});
  return reqs;
}

GrayImage inverted(const EdgeMap& e) {
  GrayImage img(e.width(), e.height());
  for (int y = 0; y < e.height(); ++y)
    for (int x = 0; x < e.width(); ++x) img(x, y) = static_cast<std::uint8_t>(255 - 255 * e(x, y));
  return img;
}

ExternalRenderConfig config_for(const testsupport::TempDir& dir, double timeout_s = 20.0) {
  ExternalRenderConfig cfg;
  cfg.input_dir = dir / "in";
  cfg.output_dir = dir / "out";
  cfg.poll_interval_ms = 5;
  cfg.timeout_s = timeout_s;
  return cfg;
}

}  // namespace

TEST_CASE("pseudo renderer: empty map is uniform base, full map is base - gain") {
  const GrayImage blank = render_pseudo(EdgeMap(kFrameSize, kFrameSize));
  for (auto v : blank.pixels()) REQUIRE(v == 200);
  EdgeMap full(kFrameSize, kFrameSize);
  for (auto& v : full.bits.pixels()) v = 1;
  const GrayImage dark = render_pseudo(full);
  for (auto v : dark.pixels()) REQUIRE(v == 60);
}

TEST_CASE("pseudo renderer: single vertical line profile") {
  EdgeMap line(kFrameSize, kFrameSize);
  for (int y = 0; y < kFrameSize; ++y) line(100, y) = 1;
  const GrayImage out = render_pseudo(line);
  const int expect[] = {144, 166, 192, 199, 200};
  for (int d = 0; d <= 4; ++d) {
    CHECK(out(100 + d, 128) == expect[d]);
    CHECK(out(100 - d, 128) == expect[d]);
  }
}

TEST_CASE("pseudo renderer: deterministic and adding edges only darkens") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const EdgeMap a = testsupport::random_edge(rng, 0.05);
    EdgeMap b = a;
    std::bernoulli_distribution add(0.05);
    for (auto& v : b.bits.pixels()) v = v || add(rng);
    const GrayImage ra = render_pseudo(a), rb = render_pseudo(b);
    CHECK(ra == render_pseudo(a));
    for (std::size_t i = 0; i < ra.size(); ++i) REQUIRE(rb.pixels()[i] <= ra.pixels()[i]);
  }
  CHECK_THROWS_AS(render_pseudo(EdgeMap(kFrameSize, kFrameSize), {200, 140, 0}), ConfigError);
}

TEST_CASE("valid_request_id") {
  CHECK(valid_request_id("000001_3"));
  CHECK(valid_request_id("a.b-c_D"));
  CHECK_FALSE(valid_request_id(""));
  CHECK_FALSE(valid_request_id("../x"));
  CHECK_FALSE(valid_request_id("a/b"));
  CHECK_FALSE(valid_request_id("a b"));
}

TEST_CASE("external renderer: 100 requests answered out of order come back in request order") {
  testsupport::TempDir dir("ext");
  const auto cfg = config_for(dir);
  auto reqs = random_requests(100, 1);
  reqs[7].output_path = dir / "saved/7.png";
  testsupport::EchoInvertStub stub({cfg.input_dir, cfg.output_dir, 42, {}, {}, {}, 0});
  const auto results = render_external(reqs, cfg);
  REQUIRE(results.size() == 100);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].request_id == reqs[i].request_id);
    REQUIRE(results[i].ok());
    REQUIRE(*results[i].image == inverted(reqs[i].edge));
  }
  CHECK_NOTHROW(throw_on_render_error(results));
  CHECK(read_png_gray(dir / "saved/7.png") == inverted(reqs[7].edge));

  std::vector<std::string> in_order;
  for (const auto& r : reqs) in_order.push_back(r.request_id);
  CHECK(stub.completion_order() != in_order);

  nlohmann::json batch = nlohmann::json::parse(std::ifstream(cfg.input_dir / "batch.json"));
  REQUIRE(batch.size() == 100);
  CHECK(batch[0]["request_id"] == "r0");
  CHECK(batch[0]["edge_path"] == "r0.edge.png");
  CHECK(read_png_header(cfg.input_dir / "r0.edge.png").bit_depth == 1);
}

TEST_CASE("external renderer: a missing response times out naming the request") {
  testsupport::TempDir dir("ext_drop");
  const auto cfg = config_for(dir, 2.0);
  const auto reqs = random_requests(6, 2);
  testsupport::EchoInvertStub stub({cfg.input_dir, cfg.output_dir, 3, {"r4"}, {}, {}, 0});
  const auto results = render_external(reqs, cfg);
  for (std::size_t i = 0; i < results.size(); ++i) CHECK(results[i].ok() == (i != 4));
  CHECK(results[4].error.find("r4") != std::string::npos);
  CHECK(results[4].error.find("timed out") != std::string::npos);
  try {
    throw_on_render_error(results);
    FAIL("expected RenderError");
  } catch (const RenderError& e) {
    CHECK(e.request_id() == "r4");
  }
}

TEST_CASE("external renderer: .err and wrong-size answers fail their own request only") {
  testsupport::TempDir dir("ext_err");
  const auto cfg = config_for(dir, 10.0);
  const auto reqs = random_requests(5, 3);
  testsupport::EchoInvertStub stub({cfg.input_dir, cfg.output_dir, 9, {}, {"r1"}, {"r3"}, 0});
  const auto results = render_external(reqs, cfg);
  CHECK(results[0].ok());
  CHECK_FALSE(results[1].ok());
  CHECK(results[1].error.find("stub refused r1") != std::string::npos);
  CHECK(results[2].ok());
  CHECK_FALSE(results[3].ok());
  CHECK(results[3].error.find("256x256") != std::string::npos);
  CHECK(results[4].ok());
}

TEST_CASE("external renderer: stale outputs from an earlier batch are not reused") {
  testsupport::TempDir dir("ext_stale");
  const auto cfg = config_for(dir, 0.3);
  const auto reqs = random_requests(2, 4);
  std::filesystem::create_directories(cfg.output_dir);
  write_png_gray(cfg.output_dir / "r0.png", GrayImage(kFrameSize, kFrameSize, 1));
  std::ofstream(cfg.output_dir / "r0.done").close();
  const auto results = render_external(reqs, cfg);
  CHECK_FALSE(results[0].ok());
  CHECK_FALSE(results[1].ok());
}

TEST_CASE("external renderer: request validation") {
  testsupport::TempDir dir("ext_bad");
  const auto cfg = config_for(dir, 0.1);
  auto reqs = random_requests(2, 5);
  reqs[1].request_id = reqs[0].request_id;
  CHECK_THROWS_AS(render_external(reqs, cfg), ConfigError);
  reqs[1].request_id = "../escape";
  CHECK_THROWS_AS(render_external(reqs, cfg), ConfigError);
  reqs[1].request_id = "ok";
  reqs[1].edge = EdgeMap(10, 10);
  CHECK_THROWS_AS(render_external(reqs, cfg), RenderError);
}
