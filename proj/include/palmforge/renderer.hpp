#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "palmforge/raster.hpp"

namespace palmforge {

struct PseudoRenderConfig {
  double base = 200.0;  ///< skin-tone intensity where there is no texture
  double gain = 140.0;  ///< darkening applied to a fully textured pixel
  double sigma = 1.0;   ///< blur of the edge map before darkening

  void validate() const;
};

/// out = clamp(base - gain * blur_sigma(edge)). Deterministic stand-in for a
/// learned generator.
GrayImage render_pseudo(const EdgeMap& edge, const PseudoRenderConfig& cfg = {});

struct RenderRequest {
  std::string request_id;
  EdgeMap edge;
  /// Where to store the accepted image; empty to keep it in memory only.
  std::filesystem::path output_path;
};

/// File protocol shared with an external generator process.
///
/// The client writes `{input_dir}/{request_id}.edge.png` for every request and
/// then atomically publishes `{input_dir}/batch.json`:
///   [{"request_id": "...", "edge_path": "<id>.edge.png"}, ...]
/// with `edge_path` relative to `input_dir`. The generator answers each
/// request in `output_dir` with `{request_id}.png` (8-bit grayscale 256x256)
/// followed by an empty `{request_id}.done`, or with `{request_id}.err`
/// holding a UTF-8 message.
struct ExternalRenderConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  int poll_interval_ms = 50;
  double timeout_s = 60.0;

  void validate() const;
};

struct RenderResult {
  std::string request_id;
  std::optional<GrayImage> image;
  std::string error;

  bool ok() const noexcept { return image.has_value(); }
};

/// True for ids made of [A-Za-z0-9._-] that are usable as file names.
bool valid_request_id(const std::string& id) noexcept;

/// Submits one batch and waits for every request to resolve. Results come
/// back in request order, whatever order the generator finished in. Failed
/// requests carry an error naming the request id; nothing is dropped.
std::vector<RenderResult> render_external(std::span<const RenderRequest> requests,
                                          const ExternalRenderConfig& cfg);

/// Throws RenderError for the first failed result.
void throw_on_render_error(std::span<const RenderResult> results);

}  // namespace palmforge
