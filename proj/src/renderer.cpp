#include "palmforge/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "palmforge/edge.hpp"
#include "palmforge/png_io.hpp"

namespace palmforge {

namespace fs = std::filesystem;

void PseudoRenderConfig::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("pseudo renderer sigma must be > 0");
  if (!std::isfinite(base) || !std::isfinite(gain))
    throw ConfigError("pseudo renderer base/gain must be finite");
}

GrayImage render_pseudo(const EdgeMap& edge, const PseudoRenderConfig& cfg) {
  cfg.validate();
  validate_binary(edge);
  RealImage e(edge.width(), edge.height());
  std::ranges::transform(edge.bits.pixels(), e.pixels().begin(),
                         [](std::uint8_t v) { return static_cast<double>(v); });
  const RealImage blurred = gaussian_smooth(e, cfg.sigma);
  RealImage out(edge.width(), edge.height());
  std::ranges::transform(blurred.pixels(), out.pixels().begin(),
                         [&](double b) { return cfg.base - cfg.gain * b; });
  return to_gray(out);
}

void ExternalRenderConfig::validate() const {
  if (input_dir.empty() || output_dir.empty())
    throw ConfigError("external renderer needs input_dir and output_dir");
  if (poll_interval_ms < 1) throw ConfigError("poll_interval_ms must be >= 1");
  if (!(timeout_s > 0.0)) throw ConfigError("timeout_s must be > 0");
}

bool valid_request_id(const std::string& id) noexcept {
  if (id.empty() || id == "." || id == ".." || id == "batch") return false;
  return std::ranges::all_of(id, [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Validates and loads one answered request.
RenderResult collect(const std::string& id, const fs::path& out_dir) {
  RenderResult r{id, std::nullopt, {}};
  const fs::path png = out_dir / (id + ".png");
  try {
    if (!fs::exists(png)) {
      r.error = "done marker present but " + png.filename().string() + " is missing";
      return r;
    }
    const PngHeader h = read_png_header(png);
    if (h.width != kFrameSize || h.height != kFrameSize) {
      r.error = "shape mismatch: expected 256x256, got " + std::to_string(h.width) + "x" +
                std::to_string(h.height);
      return r;
    }
    if (h.bit_depth != 8 || h.channels != 1) {
      r.error = "expected 8-bit single-channel PNG, got bit depth " +
                std::to_string(h.bit_depth) + " with " + std::to_string(h.channels) +
                " channel(s)";
      return r;
    }
    r.image = read_png_gray(png);
  } catch (const Error& ex) {
    r.error = std::string("malformed response: ") + ex.what();
  }
  return r;
}

}  // namespace

std::vector<RenderResult> render_external(std::span<const RenderRequest> requests,
                                          const ExternalRenderConfig& cfg) {
  cfg.validate();
  std::set<std::string> ids;
  for (const auto& req : requests) {
    if (!valid_request_id(req.request_id))
      throw ConfigError("invalid request_id '" + req.request_id + "'");
    if (!ids.insert(req.request_id).second)
      throw ConfigError("duplicate request_id '" + req.request_id + "'");
    if (req.edge.width() != kFrameSize || req.edge.height() != kFrameSize)
      throw RenderError(req.request_id, "edge map must be 256x256");
    validate_binary(req.edge);
  }
  fs::create_directories(cfg.input_dir);
  fs::create_directories(cfg.output_dir);
  fs::remove(cfg.input_dir / "batch.json");

  nlohmann::ordered_json batch = nlohmann::ordered_json::array();
  for (const auto& req : requests) {
    for (const char* ext : {".png", ".done", ".err"})
      fs::remove(cfg.output_dir / (req.request_id + ext));
    const std::string edge_name = req.request_id + ".edge.png";
    write_png_edge(cfg.input_dir / edge_name, req.edge);
    batch.push_back({{"request_id", req.request_id}, {"edge_path", edge_name}});
  }
  {
    const fs::path tmp = cfg.input_dir / "batch.json.tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << batch.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("cannot write " + tmp.string());
    fs::rename(tmp, cfg.input_dir / "batch.json");
  }

  std::vector<RenderResult> results(requests.size());
  std::vector<bool> resolved(requests.size(), false);
  std::size_t pending = requests.size();
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(cfg.timeout_s));
  while (pending > 0) {
    for (std::size_t i = 0; i < requests.size(); ++i) {
      if (resolved[i]) continue;
      const std::string& id = requests[i].request_id;
      const fs::path err = cfg.output_dir / (id + ".err");
      if (fs::exists(err)) {
        results[i] = {id, std::nullopt, "generator error: " + read_text(err)};
      } else if (fs::exists(cfg.output_dir / (id + ".done"))) {
        results[i] = collect(id, cfg.output_dir);
      } else {
        continue;
      }
      resolved[i] = true;
      --pending;
    }
    if (pending == 0) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      for (std::size_t i = 0; i < requests.size(); ++i)
        if (!resolved[i])
          results[i] = {requests[i].request_id, std::nullopt,
                        "timed out after " + std::to_string(cfg.timeout_s) +
                            " s waiting for " + requests[i].request_id + ".done"};
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(cfg.poll_interval_ms));
  }

  for (std::size_t i = 0; i < requests.size(); ++i)
    if (results[i].ok() && !requests[i].output_path.empty())
      write_png_gray(requests[i].output_path, *results[i].image);
  return results;
}

void throw_on_render_error(std::span<const RenderResult> results) {
  for (const auto& r : results)
    if (!r.ok()) throw RenderError(r.request_id, r.error);
}

}  // namespace palmforge
