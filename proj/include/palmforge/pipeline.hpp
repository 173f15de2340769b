#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "palmforge/config.hpp"

namespace palmforge {

/// A stage failed for a reason other than configuration. Maps to exit code 3.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RunOptions {
  bool force = false;  ///< recompute outputs that already exist
};

struct StageSummary {
  std::string stage;
  std::size_t written = 0;
  std::size_t skipped = 0;
  double seconds = 0.0;
};

/// Directory layout shared by the stages.
struct WorkLayout {
  std::filesystem::path work;
  std::filesystem::path out;

  std::filesystem::path identities() const { return work / "identities.json"; }
  std::filesystem::path normalized(int id, int g) const;
  std::filesystem::path edges_dir() const { return work / "edges"; }
  std::filesystem::path edge(int id, int g) const;
  std::filesystem::path plan() const { return work / "plan.jsonl"; }
  std::filesystem::path plan_summary() const { return work / "plan_summary.json"; }
  std::filesystem::path assembled_manifest() const { return work / "assembled" / "manifest.jsonl"; }
  std::filesystem::path render_manifest() const { return work / "rendered" / "manifest.jsonl"; }
  std::filesystem::path manifest() const { return out / "manifest.jsonl"; }
};

WorkLayout layout_for(const PipelineConfig& cfg);

/// Zero-padded plan index, e.g. 7 -> "000007".
std::string synthetic_id_name(std::size_t plan_index);

/// Corpus + sidecar -> `work/normalized/{identity}/{gesture}.png`.
StageSummary cmd_normalize(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Normalized palms -> `work/edges/{identity}/{gesture}.png`.
StageSummary cmd_canny(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Identity plan for the corpus -> `work/plan.jsonl` and `work/plan_summary.json`.
StageSummary cmd_plan(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Plan + edges -> `work/assembled/{synthetic_id}/{sample_idx}_edge.png`.
/// Throws ConfigError when ids_to_generate exceeds the plan capacity.
StageSummary cmd_assemble(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Assembled edges -> `work/rendered/{synthetic_id}/{sample_idx}.png`.
StageSummary cmd_render(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Rendered palms -> `out/{synthetic_id}/{sample_idx}.png`, `out/manifest.jsonl`,
/// `out/plan.jsonl` and `out/summary.json`.
StageSummary cmd_augment(const PipelineConfig& cfg, const RunOptions& opt = {});

/// All stages in order; also writes `out/timing.json`.
std::vector<StageSummary> cmd_dataset(const PipelineConfig& cfg, const RunOptions& opt = {});

struct DatasetCheck {
  bool ok = true;
  std::string message;
  std::size_t images = 0;
  std::size_t records = 0;
};

/// Manifest completeness (every image has exactly one record and vice versa,
/// (synthetic_id, sample_idx) unique) and verify_plan on the embedded plan.
DatasetCheck check_dataset(const std::filesystem::path& out_dir);

}  // namespace palmforge
