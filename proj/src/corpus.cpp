#include "palmforge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "palmforge/png_io.hpp"
#include "palmforge/rng.hpp"

namespace palmforge {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<KeypointRecord> parse_keypoint_sidecar(std::istream& in) {
  std::vector<KeypointRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    const std::string where = "keypoint sidecar line " + std::to_string(lineno) + ": ";
    if (fields.size() != 1 + 2 * kHandKeyPointCount)
      throw ConfigError(where + "expected 43 fields, got " + std::to_string(fields.size()));
    if (fields[0].empty()) throw ConfigError(where + "empty image path");
    std::array<Point2, kHandKeyPointCount> pts;
    for (int i = 0; i < kHandKeyPointCount; ++i) {
      double v[2];
      for (int c = 0; c < 2; ++c) {
        const std::string& s = fields[static_cast<std::size_t>(1 + 2 * i + c)];
        std::size_t used = 0;
        try {
          v[c] = std::stod(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size())
          throw ConfigError(where + "bad coordinate '" + s + "'");
      }
      pts[static_cast<std::size_t>(i)] = {v[0], v[1]};
    }
    try {
      out.push_back({fields[0], HandKeyPoints(pts)});
    } catch (const GeometryError& ex) {
      throw ConfigError(where + ex.what());
    }
  }
  return out;
}

std::vector<KeypointRecord> read_keypoint_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read keypoint sidecar '" + path.string() + "'");
  return parse_keypoint_sidecar(in);
}

CorpusIndex index_corpus(const std::vector<KeypointRecord>& records, const fs::path& root) {
  std::map<std::string, std::vector<CorpusImage>> groups;
  for (const auto& r : records) {
    fs::path p(r.image_path);
    if (p.is_relative()) p = root / p;
    const std::string identity = fs::path(r.image_path).parent_path().filename().string();
    if (identity.empty())
      throw ConfigError("image '" + r.image_path + "' has no identity directory");
    groups[identity].push_back({p, r.keypoints});
  }
  CorpusIndex idx;
  for (auto& [name, imgs] : groups) {
    std::sort(imgs.begin(), imgs.end(),
              [](const CorpusImage& a, const CorpusImage& b) { return a.path < b.path; });
    for (std::size_t i = 1; i < imgs.size(); ++i)
      if (imgs[i].path == imgs[i - 1].path)
        throw ConfigError("image '" + imgs[i].path.string() + "' listed twice in sidecar");
    idx.identity_names.push_back(name);
    idx.gestures.push_back(std::move(imgs));
  }
  return idx;
}

std::array<Point2, kHandKeyPointCount> canonical_hand_layout() {
  std::array<Point2, kHandKeyPointCount> p{};
  p[0] = {128.0, 250.0};  // wrist
  // thumb
  p[1] = {80.0, 215.0};
  p[2] = {52.0, 185.0};
  p[3] = {36.0, 160.0};
  p[4] = {24.0, 138.0};
  const AlignmentConfig defaults;
  for (int f = 0; f < 4; ++f) {
    const Point2 mcp = defaults.targets[static_cast<std::size_t>(f)];
    for (int j = 0; j < 4; ++j)
      p[static_cast<std::size_t>(5 + 4 * f + j)] = {mcp.x + (f - 1.5) * 3.0 * j, mcp.y - 16.0 * j};
  }
  return p;
}

namespace {

// Dark anti-aliased quadratic Bezier stroke.
void stroke(RealImage& img, Point2 a, Point2 c, Point2 b, double width, double depth) {
  const int steps = 200;
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const double x = (1 - t) * (1 - t) * a.x + 2 * (1 - t) * t * c.x + t * t * b.x;
    const double y = (1 - t) * (1 - t) * a.y + 2 * (1 - t) * t * c.y + t * t * b.y;
    const int r = static_cast<int>(std::ceil(width)) + 1;
    for (int py = static_cast<int>(y) - r; py <= static_cast<int>(y) + r; ++py)
      for (int px = static_cast<int>(x) - r; px <= static_cast<int>(x) + r; ++px) {
        if (!img.contains(px, py)) continue;
        const double d = std::hypot(px - x, py - y);
        const double cover = std::clamp(width - d + 0.5, 0.0, 1.0);
        img(px, py) = std::min(img(px, py), 200.0 - depth * cover);
      }
  }
}

Point2 uniform_point(Rng& rng, double x0, double x1, double y0, double y1) {
  return {std::uniform_real_distribution<double>(x0, x1)(rng),
          std::uniform_real_distribution<double>(y0, y1)(rng)};
}

// Identity texture in the canonical frame: principal lines plus wrinkles.
RealImage palm_texture(std::uint64_t seed) {
  Rng rng(seed);
  RealImage img(kFrameSize, kFrameSize, 200.0);
  auto jitter = [&](double v, double a) { return v + std::uniform_real_distribution<double>(-a, a)(rng); };
  stroke(img, {jitter(40, 8), jitter(110, 10)}, {jitter(120, 15), jitter(95, 10)}, {jitter(220, 8), jitter(120, 12)}, 1.8, 130);
  stroke(img, {jitter(40, 8), jitter(135, 10)}, {jitter(110, 15), jitter(150, 10)}, {jitter(200, 10), jitter(190, 12)}, 1.8, 130);
  stroke(img, {jitter(70, 10), jitter(120, 10)}, {jitter(80, 15), jitter(190, 10)}, {jitter(115, 10), jitter(245, 8)}, 1.8, 130);
  const int wrinkles = std::uniform_int_distribution<int>(18, 28)(rng);
  for (int i = 0; i < wrinkles; ++i) {
    const Point2 a = uniform_point(rng, 30, 226, 70, 240);
    const Point2 c = {jitter(a.x, 20), jitter(a.y, 20)};
    const Point2 b = {jitter(a.x, 30), jitter(a.y, 30)};
    stroke(img, a, c, b, 1.2, std::uniform_real_distribution<double>(80, 120)(rng));
  }
  return img;
}

// Gesture-dependent finger region above the MCP arc.
void finger_region(RealImage& img, Rng& rng) {
  const AlignmentConfig defaults;
  for (const auto& mcp : defaults.targets) {
    const double bend = std::uniform_real_distribution<double>(-12, 12)(rng);
    stroke(img, {mcp.x - 9, mcp.y}, {mcp.x - 9 + bend, mcp.y - 30}, {mcp.x - 7 + 2 * bend, mcp.y - 60}, 1.4, 110);
    stroke(img, {mcp.x + 9, mcp.y}, {mcp.x + 9 + bend, mcp.y - 30}, {mcp.x + 7 + 2 * bend, mcp.y - 60}, 1.4, 110);
    for (int c = 0; c < 3; ++c) {
      const double y = mcp.y - std::uniform_real_distribution<double>(8, 45)(rng);
      stroke(img, {mcp.x - 7, y}, {mcp.x + bend * 0.3, y + 2}, {mcp.x + 7, y}, 1.1, 90);
    }
  }
  const int spots = std::uniform_int_distribution<int>(4, 9)(rng);
  for (int i = 0; i < spots; ++i) {
    const bool left = std::bernoulli_distribution(0.5)(rng);
    const Point2 a = uniform_point(rng, left ? 2 : 196, left ? 58 : 254, 60, 250);
    stroke(img, a, {a.x + 10, a.y + 6}, {a.x + 18, a.y - 4}, 1.2, 100);
  }
}

GrayImage to_gray_noisy(const RealImage& img, Rng& rng, double sigma) {
  std::normal_distribution<double> noise(0.0, sigma);
  RealImage n = img;
  for (auto& v : n.pixels()) v += noise(rng);
  return to_gray(n);
}

}  // namespace

void write_demo_corpus(const fs::path& dir, const DemoCorpusConfig& cfg) {
  if (cfg.identities < 1 || cfg.gestures < 1 || cfg.image_size < 64)
    throw ConfigError("demo corpus needs identities >= 1, gestures >= 1, image_size >= 64");
  fs::create_directories(dir / "corpus");
  std::ofstream sidecar(dir / "keypoints.csv");
  sidecar << "# image_path, x0,y0, ..., x20,y20\n";
  const auto layout = canonical_hand_layout();
  const double half = cfg.image_size / 2.0;

  for (int id = 0; id < cfg.identities; ++id) {
    char name[32];
    std::snprintf(name, sizeof name, "id%03d", id);
    const RealImage texture =
        palm_texture(derive_seed(cfg.seed, {static_cast<std::uint64_t>(SeedDomain::corpus), 0,
                                            static_cast<std::uint64_t>(id)}));
    for (int g = 0; g < cfg.gestures; ++g) {
      Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(SeedDomain::corpus), 1,
                                     static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(g)}));
      RealImage frame = texture;
      finger_region(frame, rng);
      const GrayImage frame8 = to_gray(frame);

      // Canonical frame -> camera image.
      const double angle = std::uniform_real_distribution<double>(-20.0, 20.0)(rng);
      const double scale = std::uniform_real_distribution<double>(1.05, 1.3)(rng);
      const double shift = cfg.image_size * 0.03;
      // Rotate and scale about the frame centre, then place near the image centre.
      AffineTransform to_camera = similarity(angle, scale, {
          half + std::uniform_real_distribution<double>(-shift, shift)(rng),
          half + std::uniform_real_distribution<double>(-shift, shift)(rng)});
      const Point2 c = to_camera.apply({128.0, 128.0});
      to_camera.translation[0] -= c.x - to_camera.translation[0];
      to_camera.translation[1] -= c.y - to_camera.translation[1];
      GrayImage camera = warp(frame8, to_camera, cfg.image_size);
      RealImage cam = to_real(camera);
      for (auto& v : cam.pixels()) v = v > 0 ? v : 25.0;  // backdrop
      camera = to_gray_noisy(cam, rng, 2.0);

      const fs::path rel = fs::path("corpus") / name / (std::to_string(g) + ".png");
      write_png_gray(dir / rel, camera);
      std::normal_distribution<double> jitter(0.0, 0.3);
      sidecar << rel.string();
      char buf[64];
      for (const auto& p : layout) {
        const Point2 q = to_camera.apply(p);
        std::snprintf(buf, sizeof buf, ",%.3f,%.3f", q.x + jitter(rng), q.y + jitter(rng));
        sidecar << buf;
      }
      sidecar << '\n';
    }
  }

  nlohmann::ordered_json config = {
      {"corpus", {{"sidecar", "keypoints.csv"}}},
      {"work_dir", "work"},
      {"output_dir", "out"},
      {"ids_to_generate", 9},
      {"samples_per_id", cfg.gestures},
      {"seed", 0},
      {"workers", 1},
  };
  std::ofstream(dir / "config.json") << config.dump(2) << '\n';
}

}  // namespace palmforge
