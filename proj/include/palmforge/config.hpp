#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "palmforge/assembler.hpp"
#include "palmforge/augment.hpp"
#include "palmforge/edge.hpp"
#include "palmforge/geometry.hpp"
#include "palmforge/planner.hpp"
#include "palmforge/renderer.hpp"

namespace palmforge {

struct CorpusConfig {
  std::filesystem::path sidecar;  ///< keypoint records, one image per line
  std::filesystem::path root;     ///< base for relative image paths; defaults to the sidecar's directory
};

enum class RendererBackend { pseudo, external };

struct RendererConfig {
  RendererBackend backend = RendererBackend::pseudo;
  PseudoRenderConfig pseudo;
  ExternalRenderConfig external;
  int batch_size = 256;  ///< requests per batch.json for the external backend
};

struct AugmentConfig {
  BasicAugConfig basic;
  CutoutConfig cutout;
};

struct PipelineConfig {
  CorpusConfig corpus;
  std::filesystem::path work_dir = "work";
  std::filesystem::path output_dir = "out";
  AlignmentConfig alignment;
  CannyConfig canny;
  RoiConfig roi;
  /// planner.n == 0 means "number of identities in the corpus".
  PlannerConfig planner{0, kCombinationLength, 5};
  VariantConfig assembly;
  RendererConfig renderer;
  AugmentConfig augment;
  int ids_to_generate = 9;
  int samples_per_id = 5;
  std::uint64_t seed = 0;
  int workers = 1;

  /// Field-level checks that do not need the corpus.
  void validate() const;
};

/// Parses a JSON config. Unknown keys, wrong types and out-of-range values
/// raise ConfigError. Relative paths resolve against `base_dir`.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical JSON text (sorted keys, every field present).
std::string config_to_json(const PipelineConfig& cfg);

/// FNV-1a 64 of the canonical JSON, minus run-only fields (workers, paths).
std::uint64_t config_hash(const PipelineConfig& cfg);

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace palmforge
