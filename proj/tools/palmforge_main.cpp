// palmforge: synthetic palmprint dataset pipeline.
//
//   palmforge normalize|canny|plan|assemble|render|augment|dataset
//       --config <file> [--force] [--workers N] [--seed S]
//   palmforge demo-corpus --out <dir> [--identities N] [--gestures G] [--seed S]
//   palmforge verify-plan --plan <plan.jsonl>
//   palmforge check-dataset --out <dir>
//
// Exit codes: 0 success, 2 config error, 3 stage failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "palmforge/corpus.hpp"
#include "palmforge/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

void print_summary(const palmforge::StageSummary& s) {
  std::printf("%-9s written=%zu skipped=%zu %.2fs\n", s.stage.c_str(), s.written, s.skipped, s.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace palmforge;
  CLI::App app{"palmforge: synthesize virtual palmprint identities"};
  app.require_subcommand(1);

  std::string config_path;
  bool force = false;
  int workers = 0;
  std::uint64_t seed = 0;

  const std::map<std::string, std::function<std::vector<StageSummary>(const PipelineConfig&, const RunOptions&)>>
      stages = {
          {"normalize", [](auto& c, auto& o) { return std::vector{cmd_normalize(c, o)}; }},
          {"canny", [](auto& c, auto& o) { return std::vector{cmd_canny(c, o)}; }},
          {"plan", [](auto& c, auto& o) { return std::vector{cmd_plan(c, o)}; }},
          {"assemble", [](auto& c, auto& o) { return std::vector{cmd_assemble(c, o)}; }},
          {"render", [](auto& c, auto& o) { return std::vector{cmd_render(c, o)}; }},
          {"augment", [](auto& c, auto& o) { return std::vector{cmd_augment(c, o)}; }},
          {"dataset", [](auto& c, auto& o) { return cmd_dataset(c, o); }},
      };
  const char* help[] = {"Normalize hand images into the 256x256 palm frame",
                        "Extract Canny edge maps", "Plan synthetic identity combinations",
                        "Assemble synthetic edge maps", "Render palms from edge maps",
                        "Augment rendered palms and write the dataset manifest",
                        "Run every stage"};
  std::vector<CLI::App*> stage_cmds;
  int h = 0;
  for (const char* name : {"normalize", "canny", "plan", "assemble", "render", "augment", "dataset"}) {
    auto* sub = app.add_subcommand(name, help[h++]);
    sub->add_option("--config", config_path, "Pipeline config (JSON)")->required();
    sub->add_flag("--force", force, "Recompute outputs that already exist");
    sub->add_option("--workers", workers, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Master seed (overrides config)");
    stage_cmds.push_back(sub);
  }

  DemoCorpusConfig demo;
  std::string demo_out;
  auto* demo_cmd = app.add_subcommand("demo-corpus", "Write a synthetic hand corpus with keypoints");
  demo_cmd->add_option("--out", demo_out, "Output directory")->required();
  demo_cmd->add_option("--identities", demo.identities, "Number of identities");
  demo_cmd->add_option("--gestures", demo.gestures, "Images per identity");
  demo_cmd->add_option("--seed", demo.seed, "Corpus seed");

  std::string plan_path;
  auto* verify_cmd = app.add_subcommand("verify-plan", "Brute-force check of a plan file");
  verify_cmd->add_option("--plan", plan_path, "plan.jsonl")->required();

  std::string check_out;
  auto* check_cmd = app.add_subcommand("check-dataset", "Check manifest completeness and the embedded plan");
  check_cmd->add_option("--out", check_out, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::string stage = "?";
  try {
    if (*demo_cmd) {
      write_demo_corpus(demo_out, demo);
      std::printf("wrote demo corpus to %s\n", demo_out.c_str());
      return 0;
    }
    if (*verify_cmd) {
      std::ifstream in(plan_path);
      if (!in) throw ConfigError("cannot read '" + plan_path + "'");
      const PlanReport r = verify_plan(read_plan_jsonl(in));
      std::printf("%s\n", r.message.c_str());
      return r.ok ? 0 : kExitStage;
    }
    if (*check_cmd) {
      const DatasetCheck c = check_dataset(check_out);
      std::printf("%s\n", c.message.c_str());
      return c.ok ? 0 : kExitStage;
    }
    for (auto* sub : stage_cmds) {
      if (!*sub) continue;
      stage = sub->get_name();
      PipelineConfig cfg = load_config(config_path);
      if (sub->count("--workers")) cfg.workers = workers;
      if (sub->count("--seed")) cfg.seed = seed;
      for (const auto& s : stages.at(stage)(cfg, RunOptions{force})) print_summary(s);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const StageError& e) {
    std::fprintf(stderr, "stage %s failed: %s\n", e.stage().c_str(), e.what());
    return kExitStage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "stage %s failed: %s\n", stage.c_str(), e.what());
    return kExitStage;
  }
  return 0;
}
