#include "palmforge/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace palmforge {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
  alignment.validate();
  canny.validate();
  (void)roi_grid(roi);
  if (planner.n != 0) planner.validate();
  if (planner.m != kCombinationLength) throw ConfigError("planner.m must be 9");
  if (planner.k < 0 || planner.k >= planner.m) throw ConfigError("planner.k must be in [0, 9)");
  assembly.validate();
  renderer.pseudo.validate();
  if (renderer.backend == RendererBackend::external) renderer.external.validate();
  if (renderer.batch_size < 1) throw ConfigError("renderer.batch_size must be >= 1");
  augment.basic.validate();
  augment.cutout.validate();
  if (ids_to_generate < 1) throw ConfigError("ids_to_generate must be >= 1");
  if (samples_per_id < 1) throw ConfigError("samples_per_id must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k))
      throw ConfigError("unknown config key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <typename T>
void get(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + (where.empty() ? "" : ".") + key +
                      "' has the wrong type");
  }
}

void get_path(const json& j, const char* key, fs::path& out, const fs::path& base,
              const std::string& where) {
  std::string s;
  if (!j.contains(key)) {
    if (!out.empty() && out.is_relative() && !base.empty()) out = base / out;
    return;
  }
  get(j, key, s, where);
  out = fs::path(s);
  if (!out.empty() && out.is_relative() && !base.empty()) out = base / out;
}

void parse_range(const json& j, RangeAug& r, const std::string& where) {
  only_keys(j, where, {"enabled", "min", "max"});
  get(j, "enabled", r.enabled, where);
  get(j, "min", r.min, where);
  get(j, "max", r.max, where);
}

json range_json(const RangeAug& r) { return {{"enabled", r.enabled}, {"min", r.min}, {"max", r.max}}; }

}  // namespace

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  PipelineConfig cfg;
  only_keys(root, "", {"corpus", "work_dir", "output_dir", "alignment", "canny", "roi", "planner",
                       "assembly", "renderer", "augment", "ids_to_generate", "samples_per_id",
                       "seed", "workers"});

  if (root.contains("corpus")) {
    const auto& c = root["corpus"];
    only_keys(c, "corpus", {"sidecar", "root"});
    get_path(c, "sidecar", cfg.corpus.sidecar, base_dir, "corpus");
    get_path(c, "root", cfg.corpus.root, base_dir, "corpus");
  }
  if (cfg.corpus.root.empty() && !cfg.corpus.sidecar.empty())
    cfg.corpus.root = cfg.corpus.sidecar.parent_path();
  get_path(root, "work_dir", cfg.work_dir, base_dir, "");
  get_path(root, "output_dir", cfg.output_dir, base_dir, "");

  if (root.contains("alignment")) {
    const auto& a = root["alignment"];
    only_keys(a, "alignment", {"reference_joints", "targets"});
    get(a, "reference_joints", cfg.alignment.reference_joints, "alignment");
    if (a.contains("targets")) {
      std::array<std::array<double, 2>, 4> t{};
      get(a, "targets", t, "alignment");
      for (std::size_t i = 0; i < 4; ++i) cfg.alignment.targets[i] = {t[i][0], t[i][1]};
    }
  }
  if (root.contains("canny")) {
    const auto& c = root["canny"];
    only_keys(c, "canny", {"sigma", "high_threshold", "low_threshold", "gradient_scale"});
    get(c, "sigma", cfg.canny.sigma, "canny");
    get(c, "high_threshold", cfg.canny.high_threshold, "canny");
    get(c, "low_threshold", cfg.canny.low_threshold, "canny");
    get(c, "gradient_scale", cfg.canny.gradient_scale, "canny");
  }
  if (root.contains("roi")) {
    const auto& r = root["roi"];
    only_keys(r, "roi", {"x", "y", "width", "height"});
    get(r, "x", cfg.roi.roi.x, "roi");
    get(r, "y", cfg.roi.roi.y, "roi");
    get(r, "width", cfg.roi.roi.width, "roi");
    get(r, "height", cfg.roi.roi.height, "roi");
  }
  if (root.contains("planner")) {
    const auto& p = root["planner"];
    only_keys(p, "planner", {"n", "m", "k"});
    get(p, "n", cfg.planner.n, "planner");
    get(p, "m", cfg.planner.m, "planner");
    get(p, "k", cfg.planner.k, "planner");
  }
  if (root.contains("assembly")) {
    const auto& a = root["assembly"];
    only_keys(a, "assembly", {"block_gesture", "donor_position", "flip_probability"});
    get(a, "block_gesture", cfg.assembly.block_gesture, "assembly");
    get(a, "donor_position", cfg.assembly.donor_position, "assembly");
    get(a, "flip_probability", cfg.assembly.flip_probability, "assembly");
  }
  if (root.contains("renderer")) {
    const auto& r = root["renderer"];
    only_keys(r, "renderer", {"backend", "pseudo", "external", "batch_size"});
    std::string backend = "pseudo";
    get(r, "backend", backend, "renderer");
    if (backend == "pseudo") cfg.renderer.backend = RendererBackend::pseudo;
    else if (backend == "external") cfg.renderer.backend = RendererBackend::external;
    else throw ConfigError("renderer.backend must be 'pseudo' or 'external'");
    get(r, "batch_size", cfg.renderer.batch_size, "renderer");
    if (r.contains("pseudo")) {
      const auto& p = r["pseudo"];
      only_keys(p, "renderer.pseudo", {"base", "gain", "sigma"});
      get(p, "base", cfg.renderer.pseudo.base, "renderer.pseudo");
      get(p, "gain", cfg.renderer.pseudo.gain, "renderer.pseudo");
      get(p, "sigma", cfg.renderer.pseudo.sigma, "renderer.pseudo");
    }
    if (r.contains("external")) {
      const auto& e = r["external"];
      only_keys(e, "renderer.external", {"input_dir", "output_dir", "poll_interval_ms", "timeout_s"});
      get_path(e, "input_dir", cfg.renderer.external.input_dir, base_dir, "renderer.external");
      get_path(e, "output_dir", cfg.renderer.external.output_dir, base_dir, "renderer.external");
      get(e, "poll_interval_ms", cfg.renderer.external.poll_interval_ms, "renderer.external");
      get(e, "timeout_s", cfg.renderer.external.timeout_s, "renderer.external");
    }
  }
  if (root.contains("augment")) {
    const auto& a = root["augment"];
    only_keys(a, "augment", {"brightness", "contrast", "rotation", "motion_blur", "cutout"});
    if (a.contains("brightness")) parse_range(a["brightness"], cfg.augment.basic.brightness, "augment.brightness");
    if (a.contains("contrast")) parse_range(a["contrast"], cfg.augment.basic.contrast, "augment.contrast");
    if (a.contains("rotation")) parse_range(a["rotation"], cfg.augment.basic.rotation, "augment.rotation");
    if (a.contains("motion_blur")) {
      const auto& m = a["motion_blur"];
      only_keys(m, "augment.motion_blur", {"enabled", "min_length", "max_length"});
      get(m, "enabled", cfg.augment.basic.motion_blur.enabled, "augment.motion_blur");
      get(m, "min_length", cfg.augment.basic.motion_blur.min_length, "augment.motion_blur");
      get(m, "max_length", cfg.augment.basic.motion_blur.max_length, "augment.motion_blur");
    }
    if (a.contains("cutout")) {
      const auto& c = a["cutout"];
      only_keys(c, "augment.cutout", {"enabled", "probability", "fill"});
      get(c, "enabled", cfg.augment.cutout.enabled, "augment.cutout");
      get(c, "probability", cfg.augment.cutout.probability, "augment.cutout");
      int fill = cfg.augment.cutout.fill;
      get(c, "fill", fill, "augment.cutout");
      if (fill < 0 || fill > 255) throw ConfigError("augment.cutout.fill must be in [0,255]");
      cfg.augment.cutout.fill = static_cast<std::uint8_t>(fill);
    }
  }
  get(root, "ids_to_generate", cfg.ids_to_generate, "");
  get(root, "samples_per_id", cfg.samples_per_id, "");
  get(root, "seed", cfg.seed, "");
  get(root, "workers", cfg.workers, "");
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

namespace {

json config_json(const PipelineConfig& cfg, bool with_run_fields) {
  json targets = json::array();
  for (const auto& t : cfg.alignment.targets) targets.push_back({t.x, t.y});
  json j = {
      {"alignment", {{"reference_joints", cfg.alignment.reference_joints}, {"targets", targets}}},
      {"canny",
       {{"sigma", cfg.canny.sigma},
        {"high_threshold", cfg.canny.high_threshold},
        {"low_threshold", cfg.canny.low_threshold},
        {"gradient_scale", cfg.canny.gradient_scale}}},
      {"roi", {{"x", cfg.roi.roi.x}, {"y", cfg.roi.roi.y}, {"width", cfg.roi.roi.width}, {"height", cfg.roi.roi.height}}},
      {"planner", {{"n", cfg.planner.n}, {"m", cfg.planner.m}, {"k", cfg.planner.k}}},
      {"assembly",
       {{"block_gesture", cfg.assembly.block_gesture},
        {"donor_position", cfg.assembly.donor_position},
        {"flip_probability", cfg.assembly.flip_probability}}},
      {"renderer",
       {{"backend", cfg.renderer.backend == RendererBackend::pseudo ? "pseudo" : "external"},
        {"batch_size", cfg.renderer.batch_size},
        {"pseudo", {{"base", cfg.renderer.pseudo.base}, {"gain", cfg.renderer.pseudo.gain}, {"sigma", cfg.renderer.pseudo.sigma}}}}},
      {"augment",
       {{"brightness", range_json(cfg.augment.basic.brightness)},
        {"contrast", range_json(cfg.augment.basic.contrast)},
        {"rotation", range_json(cfg.augment.basic.rotation)},
        {"motion_blur",
         {{"enabled", cfg.augment.basic.motion_blur.enabled},
          {"min_length", cfg.augment.basic.motion_blur.min_length},
          {"max_length", cfg.augment.basic.motion_blur.max_length}}},
        {"cutout",
         {{"enabled", cfg.augment.cutout.enabled},
          {"probability", cfg.augment.cutout.probability},
          {"fill", cfg.augment.cutout.fill}}}}},
      {"ids_to_generate", cfg.ids_to_generate},
      {"samples_per_id", cfg.samples_per_id},
      {"seed", cfg.seed},
  };
  if (with_run_fields) {
    j["workers"] = cfg.workers;
    j["corpus"] = {{"sidecar", cfg.corpus.sidecar.string()}, {"root", cfg.corpus.root.string()}};
    j["work_dir"] = cfg.work_dir.string();
    j["output_dir"] = cfg.output_dir.string();
    j["renderer"]["external"] = {{"input_dir", cfg.renderer.external.input_dir.string()},
                                 {"output_dir", cfg.renderer.external.output_dir.string()},
                                 {"poll_interval_ms", cfg.renderer.external.poll_interval_ms},
                                 {"timeout_s", cfg.renderer.external.timeout_s}};
  }
  return j;
}

}  // namespace

std::string config_to_json(const PipelineConfig& cfg) { return config_json(cfg, true).dump(2); }

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h) noexcept {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::uint64_t config_hash(const PipelineConfig& cfg) {
  const std::string s = config_json(cfg, false).dump();
  return fnv1a64(s.data(), s.size());
}

}  // namespace palmforge
