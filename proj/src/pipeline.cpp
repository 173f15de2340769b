#include "palmforge/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "palmforge/corpus.hpp"
#include "palmforge/parallel.hpp"
#include "palmforge/png_io.hpp"
#include "palmforge/rng.hpp"

namespace palmforge {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using nlohmann::json;

fs::path WorkLayout::normalized(int id, int g) const {
  return work / "normalized" / std::to_string(id) / (std::to_string(g) + ".png");
}

fs::path WorkLayout::edge(int id, int g) const {
  return work / "edges" / std::to_string(id) / (std::to_string(g) + ".png");
}

WorkLayout layout_for(const PipelineConfig& cfg) { return {cfg.work_dir, cfg.output_dir}; }

std::string synthetic_id_name(std::size_t plan_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", plan_index);
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Configuration problems keep their type; everything else becomes a StageError.
template <typename Fn>
StageSummary run_stage(const std::string& name, Fn&& fn) {
  const auto t0 = Clock::now();
  StageSummary s;
  try {
    s = fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw StageError(name, ex.what());
  }
  s.stage = name;
  s.seconds = seconds_since(t0);
  return s;
}

std::string hash_pixels(const GrayImage& img) {
  return hex64(fnv1a64(img.pixels().data(), img.pixels().size()));
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing input '" + path.string() + "'");
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(json::parse(line));
  return rows;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing input '" + path.string() + "'");
  return json::parse(in);
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

struct IdentityInfo {
  std::string name;
  int gestures = 0;
};

std::vector<IdentityInfo> read_identities(const WorkLayout& L) {
  std::vector<IdentityInfo> out;
  for (const auto& rec : read_json(L.identities()))
    out.push_back({rec.at("name").get<std::string>(), rec.at("gestures").get<int>()});
  return out;
}

bool should_write(const fs::path& p, const RunOptions& opt) { return opt.force || !fs::exists(p); }

}  // namespace

StageSummary cmd_normalize(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("normalize", [&] {
    if (cfg.corpus.sidecar.empty()) throw ConfigError("corpus.sidecar is not set");
    const WorkLayout L = layout_for(cfg);
    const CorpusIndex idx = index_corpus(read_keypoint_sidecar(cfg.corpus.sidecar), cfg.corpus.root);
    if (idx.identity_count() == 0) throw IoError("keypoint sidecar lists no images");

    struct Job {
      int id, g;
      const CorpusImage* img;
    };
    std::vector<Job> jobs;
    ojson identities = ojson::array();
    for (std::size_t id = 0; id < idx.identity_count(); ++id) {
      identities.push_back({{"identity", id},
                            {"name", idx.identity_names[id]},
                            {"gestures", idx.gestures[id].size()}});
      for (std::size_t g = 0; g < idx.gestures[id].size(); ++g)
        jobs.push_back({static_cast<int>(id), static_cast<int>(g), &idx.gestures[id][g]});
    }
    fs::create_directories(L.work / "normalized");
    write_text(L.identities(), identities.dump(2) + "\n");

    StageSummary s;
    std::atomic<std::size_t> written{0};
    OrderedLineWriter manifest((L.work / "normalized" / "manifest.jsonl").string());
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
      const Job& j = jobs[i];
      AffineTransform t;
      try {
        t = estimate_affine(j.img->keypoints, cfg.alignment);
      } catch (const GeometryError& ex) {
        throw GeometryError("'" + j.img->path.string() + "': " + ex.what());
      }
      const fs::path out = L.normalized(j.id, j.g);
      if (should_write(out, opt)) {
        write_png_gray(out, warp(read_png_gray(j.img->path), t));
        ++written;
      }
      ojson rec = {{"identity", j.id},
                   {"gesture", j.g},
                   {"source", j.img->path.lexically_relative(cfg.corpus.root).string()},
                   {"affine", {t.linear[0], t.linear[1], t.translation[0], t.linear[2], t.linear[3], t.translation[1]}},
                   {"path", out.lexically_relative(L.work).string()}};
      manifest.submit(i, rec.dump());
    });
    manifest.finish(jobs.size());
    s.written = written;
    s.skipped = jobs.size() - s.written;
    return s;
  });
}

StageSummary cmd_canny(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("canny", [&] {
    const WorkLayout L = layout_for(cfg);
    const auto ids = read_identities(L);
    std::vector<std::pair<int, int>> jobs;
    for (std::size_t id = 0; id < ids.size(); ++id)
      for (int g = 0; g < ids[id].gestures; ++g) jobs.emplace_back(static_cast<int>(id), g);

    fs::create_directories(L.edges_dir());
    std::atomic<std::size_t> written{0};
    OrderedLineWriter manifest((L.edges_dir() / "manifest.jsonl").string());
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
      const auto [id, g] = jobs[i];
      const fs::path out = L.edge(id, g);
      EdgeMap e;
      if (should_write(out, opt)) {
        e = canny(read_png_gray(L.normalized(id, g)), cfg.canny);
        write_png_edge(out, e);
        ++written;
      } else {
        e = read_png_edge(out);
      }
      ojson rec = {{"identity", id},
                   {"gesture", g},
                   {"edge_pixels", e.count()},
                   {"hash", hex64(fnv1a64(e.bits.pixels().data(), e.bits.size()))},
                   {"path", out.lexically_relative(L.work).string()}};
      manifest.submit(i, rec.dump());
    });
    manifest.finish(jobs.size());
    StageSummary s;
    s.written = written;
    s.skipped = jobs.size() - s.written;
    return s;
  });
}

StageSummary cmd_plan(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("plan", [&] {
    const WorkLayout L = layout_for(cfg);
    PlannerConfig pc = cfg.planner;
    if (pc.n == 0) pc.n = static_cast<int>(read_identities(L).size());
    pc.validate();

    StageSummary s;
    if (!opt.force && fs::exists(L.plan()) && fs::exists(L.plan_summary())) {
      const json prev = read_json(L.plan_summary());
      if (prev.at("n") == pc.n && prev.at("m") == pc.m && prev.at("k") == pc.k) {
        s.skipped = 1;
        return s;
      }
    }
    const IdentityPlan p = plan(pc);
    write_text(L.plan(), plan_to_jsonl(p));
    ojson summary = {{"n", pc.n},
                     {"m", pc.m},
                     {"k", pc.k},
                     {"candidates", binomial(pc.n, pc.m)},
                     {"clique_size", p.clique_size()},
                     {"combinations", p.size()}};
    write_text(L.plan_summary(), summary.dump(2) + "\n");
    s.written = 1;
    return s;
  });
}

namespace {

ojson pair_json(const SourceRef& r) { return ojson::array({r.identity, r.gesture}); }

IdentityPlan load_plan(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing input '" + path.string() + "'");
  return read_plan_jsonl(in);
}

}  // namespace

StageSummary cmd_assemble(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("assemble", [&] {
    const WorkLayout L = layout_for(cfg);
    const IdentityPlan p = load_plan(L.plan());
    const std::size_t ids = static_cast<std::size_t>(cfg.ids_to_generate);
    if (ids > p.size())
      throw ConfigError("ids_to_generate=" + std::to_string(ids) +
                        " exceeds plan capacity; max capacity is " + std::to_string(p.size()));
    const EdgeLibrary lib = EdgeLibrary::load(L.edges_dir());
    const RoiGrid grid = roi_grid(cfg.roi);
    const std::size_t samples = static_cast<std::size_t>(cfg.samples_per_id);

    fs::create_directories(L.work / "assembled");
    std::atomic<std::size_t> written{0};
    OrderedLineWriter manifest(L.assembled_manifest().string());
    parallel_for(ids, cfg.workers, [&](std::size_t sid) {
      const PlanEntry& entry = p.entries[sid];
      Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(SeedDomain::identity), sid}));
      const auto specs = sample_variants(entry.combination, lib, static_cast<int>(samples), rng, cfg.assembly);
      const std::string name = synthetic_id_name(sid);
      for (std::size_t k = 0; k < samples; ++k) {
        const AssemblySpec& spec = specs[k];
        const fs::path out = L.work / "assembled" / name / (std::to_string(k) + "_edge.png");
        EdgeMap e;
        if (should_write(out, opt)) {
          e = assemble_edge(spec, lib, grid);
          write_png_edge(out, e);
          ++written;
        } else {
          e = read_png_edge(out);
        }
        ojson sources = ojson::array();
        for (int j = 1; j <= kCombinationLength; ++j) sources.push_back(pair_json(spec.block_source(j)));
        ojson rec = {{"synthetic_id", name},
                     {"sample_idx", k},
                     {"plan_index", sid},
                     {"subset", std::vector<int>(entry.subset.members().begin(), entry.subset.members().end())},
                     {"rotation", entry.rotation},
                     {"block_sources", sources},
                     {"background", pair_json(spec.background)},
                     {"flip", spec.flip},
                     {"edge_path", out.lexically_relative(L.work).string()},
                     {"edge_hash", hex64(fnv1a64(e.bits.pixels().data(), e.bits.size()))}};
        manifest.submit(sid * samples + k, rec.dump());
      }
    });
    manifest.finish(ids * samples);
    StageSummary s;
    s.written = written;
    s.skipped = ids * samples - s.written;
    return s;
  });
}

StageSummary cmd_render(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("render", [&] {
    const WorkLayout L = layout_for(cfg);
    const auto rows = read_jsonl(L.assembled_manifest());
    struct Item {
      std::string sid;
      std::size_t sample;
      fs::path edge;
      fs::path out;
    };
    std::vector<Item> items;
    for (const auto& r : rows) {
      const std::string sid = r.at("synthetic_id").get<std::string>();
      const std::size_t k = r.at("sample_idx").get<std::size_t>();
      items.push_back({sid, k, L.work / r.at("edge_path").get<std::string>(),
                       L.work / "rendered" / sid / (std::to_string(k) + ".png")});
    }
    fs::create_directories(L.work / "rendered");
    std::atomic<std::size_t> written{0};

    if (cfg.renderer.backend == RendererBackend::pseudo) {
      parallel_for(items.size(), cfg.workers, [&](std::size_t i) {
        if (!should_write(items[i].out, opt)) return;
        write_png_gray(items[i].out, render_pseudo(read_png_edge(items[i].edge), cfg.renderer.pseudo));
        ++written;
      });
    } else {
      std::vector<std::size_t> todo;
      for (std::size_t i = 0; i < items.size(); ++i)
        if (should_write(items[i].out, opt)) todo.push_back(i);
      const std::size_t batch = static_cast<std::size_t>(cfg.renderer.batch_size);
      for (std::size_t b = 0; b < todo.size(); b += batch) {
        std::vector<RenderRequest> reqs;
        for (std::size_t i = b; i < std::min(todo.size(), b + batch); ++i) {
          const Item& it = items[todo[i]];
          reqs.push_back({it.sid + "_" + std::to_string(it.sample), read_png_edge(it.edge), it.out});
        }
        const auto results = render_external(reqs, cfg.renderer.external);
        throw_on_render_error(results);
        written += results.size();
      }
    }

    OrderedLineWriter manifest(L.render_manifest().string());
    parallel_for(items.size(), cfg.workers, [&](std::size_t i) {
      const GrayImage img = read_png_gray(items[i].out);
      if (img.width() != kFrameSize || img.height() != kFrameSize)
        throw RenderError(items[i].sid + "_" + std::to_string(items[i].sample), "rendered image is not 256x256");
      ojson rec = {{"synthetic_id", items[i].sid},
                   {"sample_idx", items[i].sample},
                   {"path", items[i].out.lexically_relative(L.work).string()},
                   {"image_hash", hash_pixels(img)}};
      manifest.submit(i, rec.dump());
    });
    manifest.finish(items.size());
    StageSummary s;
    s.written = written;
    s.skipped = items.size() - s.written;
    return s;
  });
}

namespace {

ojson draws_json(const AugDraws& d, const CutoutSpec& c) {
  ojson j = ojson::object();
  if (d.brightness) j["brightness"] = *d.brightness;
  if (d.contrast) j["contrast"] = *d.contrast;
  if (d.rotation_deg) j["rotation_deg"] = *d.rotation_deg;
  if (d.blur_length) j["blur_length"] = *d.blur_length;
  if (d.blur_angle_deg) j["blur_angle_deg"] = *d.blur_angle_deg;
  ojson cut = ojson::object();
  for (Border b : kBorders) {
    const BorderCut& bc = c[b];
    cut[border_name(b)] = {{"applied", bc.applied}, {"depth", bc.depth}};
  }
  cut["fill"] = c.fill;
  j["cutout"] = cut;
  return j;
}

}  // namespace

StageSummary cmd_augment(const PipelineConfig& cfg, const RunOptions& opt) {
  return run_stage("augment", [&] {
    const WorkLayout L = layout_for(cfg);
    const auto rows = read_jsonl(L.assembled_manifest());
    fs::create_directories(L.out);
    std::atomic<std::size_t> written{0};
    OrderedLineWriter manifest(L.manifest().string());
    parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
      const json& r = rows[i];
      const std::string sid = r.at("synthetic_id").get<std::string>();
      const std::size_t k = r.at("sample_idx").get<std::size_t>();
      const std::size_t plan_index = r.at("plan_index").get<std::size_t>();
      const std::uint64_t seed =
          derive_seed(cfg.seed, {static_cast<std::uint64_t>(SeedDomain::sample), plan_index, k});
      Rng rng(seed);
      const GrayImage rendered = read_png_gray(L.work / "rendered" / sid / (std::to_string(k) + ".png"));
      BasicAugResult basic = basic_augs(rendered, rng, cfg.augment.basic);
      CutoutResult cut = border_cutout(basic.image, rng, cfg.augment.cutout);

      const fs::path rel = fs::path(sid) / (std::to_string(k) + ".png");
      const fs::path out = L.out / rel;
      if (should_write(out, opt)) {
        write_png_gray(out, cut.image);
        ++written;
      }
      ojson rec = {{"synthetic_id", sid},
                   {"sample_idx", k},
                   {"plan_index", plan_index},
                   {"subset", r.at("subset")},
                   {"rotation", r.at("rotation")},
                   {"block_sources", r.at("block_sources")},
                   {"background", r.at("background")},
                   {"flip", r.at("flip")},
                   {"augmentation", draws_json(basic.draws, cut.spec)},
                   {"seed", hex64(seed)},
                   {"edge_hash", r.at("edge_hash")},
                   {"image_hash", hash_pixels(cut.image)},
                   {"path", rel.string()}};
      manifest.submit(i, rec.dump());
    });
    manifest.finish(rows.size());

    fs::copy_file(L.plan(), L.out / "plan.jsonl", fs::copy_options::overwrite_existing);
    const json plan_summary = read_json(L.plan_summary());
    ojson summary = {{"config_hash", hex64(config_hash(cfg))},
                     {"ids_to_generate", cfg.ids_to_generate},
                     {"samples_per_id", cfg.samples_per_id},
                     {"images", rows.size()},
                     {"source_identities", plan_summary.at("n")},
                     {"clique_size", plan_summary.at("clique_size")},
                     {"plan_combinations", plan_summary.at("combinations")}};
    write_text(L.out / "summary.json", summary.dump(2) + "\n");
    StageSummary s;
    s.written = written;
    s.skipped = rows.size() - s.written;
    return s;
  });
}

std::vector<StageSummary> cmd_dataset(const PipelineConfig& cfg, const RunOptions& opt) {
  const auto t0 = Clock::now();
  std::vector<StageSummary> stages;
  stages.push_back(cmd_normalize(cfg, opt));
  stages.push_back(cmd_canny(cfg, opt));
  stages.push_back(cmd_plan(cfg, opt));
  stages.push_back(cmd_assemble(cfg, opt));
  stages.push_back(cmd_render(cfg, opt));
  stages.push_back(cmd_augment(cfg, opt));

  ojson timing = {{"total_seconds", seconds_since(t0)}, {"workers", cfg.workers}};
  for (const auto& s : stages)
    timing["stages"][s.stage] = {{"seconds", s.seconds}, {"written", s.written}, {"skipped", s.skipped}};
  write_text(layout_for(cfg).out / "timing.json", timing.dump(2) + "\n");
  return stages;
}

DatasetCheck check_dataset(const fs::path& out_dir) {
  DatasetCheck c;
  auto fail = [&](std::string msg) {
    c.ok = false;
    c.message = std::move(msg);
    return c;
  };
  std::set<std::string> images;
  for (const auto& e : fs::recursive_directory_iterator(out_dir))
    if (e.is_regular_file() && e.path().extension() == ".png")
      images.insert(e.path().lexically_relative(out_dir).string());
  c.images = images.size();

  std::vector<json> rows;
  try {
    rows = read_jsonl(out_dir / "manifest.jsonl");
  } catch (const std::exception& ex) {
    return fail(ex.what());
  }
  c.records = rows.size();
  std::set<std::string> paths;
  std::set<std::pair<std::string, std::size_t>> keys;
  for (const auto& r : rows) {
    const std::string path = r.at("path").get<std::string>();
    if (!paths.insert(path).second) return fail("manifest lists '" + path + "' twice");
    if (!keys.insert({r.at("synthetic_id").get<std::string>(), r.at("sample_idx").get<std::size_t>()}).second)
      return fail("duplicate (synthetic_id, sample_idx) for '" + path + "'");
    if (!images.contains(path)) return fail("manifest row for missing image '" + path + "'");
  }
  for (const auto& img : images)
    if (!paths.contains(img)) return fail("image '" + img + "' has no manifest row");

  std::ifstream in(out_dir / "plan.jsonl");
  if (!in) return fail("dataset has no plan.jsonl");
  const PlanReport report = verify_plan(read_plan_jsonl(in));
  if (!report.ok) return fail("embedded plan fails verification: " + report.message);
  c.message = "ok: " + std::to_string(c.images) + " images, " + std::to_string(c.records) +
              " records; " + report.message;
  return c;
}

}  // namespace palmforge
