#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "palmforge/augment.hpp"
#include "palmforge/corpus.hpp"
#include "palmforge/edge.hpp"
#include "palmforge/geometry.hpp"
#include "palmforge/pipeline.hpp"
#include "palmforge/planner.hpp"
#include "palmforge/renderer.hpp"

namespace py = pybind11;
using namespace palmforge;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
  const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  GrayImage img(w, h);
  std::copy_n(a.data(), img.size(), img.pixels().begin());
  return img;
}

U8Array to_array(const Raster<std::uint8_t>& img) {
  U8Array out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

EdgeMap to_edge(const U8Array& a) { return EdgeMap(to_image(a)); }

std::vector<Point2> to_points(const F64Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an (n, 2) array of points");
  std::vector<Point2> pts(static_cast<std::size_t>(a.shape(0)));
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {a.at(i, 0), a.at(i, 1)};
  return pts;
}

F64Array to_matrix(const AffineTransform& t) {
  F64Array m({2, 3});
  auto r = m.mutable_unchecked<2>();
  r(0, 0) = t.linear[0];
  r(0, 1) = t.linear[1];
  r(0, 2) = t.translation[0];
  r(1, 0) = t.linear[2];
  r(1, 1) = t.linear[3];
  r(1, 2) = t.translation[1];
  return m;
}

AffineTransform from_matrix(const F64Array& m) {
  if (m.ndim() != 2 || m.shape(0) != 2 || m.shape(1) != 3) throw py::value_error("expected a 2x3 matrix");
  AffineTransform t;
  t.linear = {m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)};
  t.translation = {m.at(0, 2), m.at(1, 2)};
  return t;
}

py::dict summary_dict(const StageSummary& s) {
  py::dict d;
  d["stage"] = s.stage;
  d["written"] = s.written;
  d["skipped"] = s.skipped;
  d["seconds"] = s.seconds;
  return d;
}

PipelineConfig load_with_overrides(const std::filesystem::path& config, std::optional<int> workers,
                                   std::optional<std::uint64_t> seed) {
  PipelineConfig cfg = load_config(config);
  if (workers) cfg.workers = *workers;
  if (seed) cfg.seed = *seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "palmforge core: edge extraction, identity planning, assembly and rendering";

  auto base = py::register_exception<Error>(m, "PalmforgeError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<LookupError>(m, "LookupError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<RenderError>(m, "RenderError", base.ptr());
  py::register_exception<StageError>(m, "StageError", base.ptr());

  m.attr("FRAME_SIZE") = kFrameSize;

  m.def(
      "fit_affine",
      [](const F64Array& src, const F64Array& dst) { return to_matrix(fit_affine(to_points(src), to_points(dst))); },
      py::arg("sources"), py::arg("targets"), "Least-squares 2x3 affine mapping sources onto targets.");

  m.def(
      "estimate_affine",
      [](const F64Array& keypoints) {
        const auto pts = to_points(keypoints);
        if (pts.size() != kHandKeyPointCount) throw py::value_error("expected 21 keypoints");
        std::array<Point2, kHandKeyPointCount> arr{};
        std::copy(pts.begin(), pts.end(), arr.begin());
        return to_matrix(estimate_affine(HandKeyPoints(arr)));
      },
      py::arg("keypoints"), "Affine taking the 21 hand keypoints into the 256x256 palm frame.");

  m.def(
      "warp",
      [](const U8Array& img, const F64Array& matrix, int out_size) {
        return to_array(warp(to_image(img), from_matrix(matrix), out_size));
      },
      py::arg("image"), py::arg("matrix"), py::arg("out_size") = kFrameSize);

  m.def(
      "roi_grid",
      [](int x, int y, int width, int height) {
        const auto g = roi_grid({{x, y, width, height}});
        std::vector<std::tuple<int, int, int, int>> blocks;
        for (const auto& b : g.blocks) blocks.emplace_back(b.x, b.y, b.width, b.height);
        return blocks;
      },
      py::arg("x") = 63, py::arg("y") = 63, py::arg("width") = 129, py::arg("height") = 129,
      "Blocks 1..9 of the ROI as (x, y, width, height), row-major.");

  m.def(
      "canny",
      [](const U8Array& img, double sigma, double high, double low, double gradient_scale) {
        const CannyConfig cfg{sigma, high, low, gradient_scale};
        cfg.validate();
        EdgeMap e;
        {
          py::gil_scoped_release release;
          e = canny(to_image(img), cfg);
        }
        return to_array(e.bits);
      },
      py::arg("image"), py::arg("sigma") = 1.4, py::arg("high_threshold") = 30.0,
      py::arg("low_threshold") = 5.0, py::arg("gradient_scale") = 0.25, "Binary 0/1 edge map.");

  m.def(
      "plan",
      [](int n, int k) {
        const auto p = plan({n, kCombinationLength, k});
        py::list out;
        for (const auto& e : p.entries) {
          py::dict d;
          d["subset"] = std::vector<int>(e.subset.members().begin(), e.subset.members().end());
          d["rotation"] = e.rotation;
          std::vector<int> ids;
          for (const auto& s : e.combination.slots) ids.push_back(s.identity);
          d["identities"] = ids;
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("k") = 5, "Combinations as dicts; identities[j-1] fills grid position j.");

  m.def(
      "plan_jsonl", [](int n, int k) { return plan_to_jsonl(plan({n, kCombinationLength, k})); }, py::arg("n"),
      py::arg("k") = 5);

  m.def(
      "verify_plan",
      [](const std::string& jsonl, int workers) {
        std::istringstream in(jsonl);
        const auto p = read_plan_jsonl(in);
        PlanReport r;
        {
          py::gil_scoped_release release;
          r = verify_plan(p, workers);
        }
        py::dict d;
        d["ok"] = r.ok;
        d["message"] = r.message;
        d["pairs_checked"] = r.pairs_checked;
        d["offending"] = r.offending ? py::cast(*r.offending) : py::none();
        return d;
      },
      py::arg("plan_jsonl"), py::arg("workers") = 1);

  m.def(
      "render_pseudo",
      [](const U8Array& edge, double base_level, double gain, double sigma) {
        return to_array(render_pseudo(to_edge(edge), {base_level, gain, sigma}));
      },
      py::arg("edge"), py::arg("base") = 200.0, py::arg("gain") = 140.0, py::arg("sigma") = 1.0);

  m.def(
      "border_cutout",
      [](const U8Array& img, std::uint64_t seed, double probability, std::uint8_t fill) {
        CutoutConfig cfg;
        cfg.probability = probability;
        cfg.fill = fill;
        Rng rng(seed);
        const auto r = border_cutout(to_image(img), rng, cfg);
        py::dict spec;
        for (auto b : kBorders) spec[border_name(b)] = r.spec[b].applied ? r.spec[b].depth : 0;
        return py::make_tuple(to_array(r.image), spec);
      },
      py::arg("image"), py::arg("seed"), py::arg("probability") = 0.5, py::arg("fill") = 0,
      "Returns (image, {border: depth or 0}).");

  m.def(
      "write_demo_corpus",
      [](const std::filesystem::path& dir, int identities, int gestures, int image_size, std::uint64_t seed) {
        write_demo_corpus(dir, {identities, gestures, image_size, seed});
      },
      py::arg("dir"), py::arg("identities") = 9, py::arg("gestures") = 5, py::arg("image_size") = 400,
      py::arg("seed") = 7);

  m.def(
      "run_stage",
      [](const std::string& stage, const std::filesystem::path& config, bool force, std::optional<int> workers,
         std::optional<std::uint64_t> seed) {
        const PipelineConfig cfg = load_with_overrides(config, workers, seed);
        const RunOptions opt{force};
        std::vector<StageSummary> out;
        {
          py::gil_scoped_release release;
          if (stage == "normalize") out = {cmd_normalize(cfg, opt)};
          else if (stage == "canny") out = {cmd_canny(cfg, opt)};
          else if (stage == "plan") out = {cmd_plan(cfg, opt)};
          else if (stage == "assemble") out = {cmd_assemble(cfg, opt)};
          else if (stage == "render") out = {cmd_render(cfg, opt)};
          else if (stage == "augment") out = {cmd_augment(cfg, opt)};
          else if (stage == "dataset") out = cmd_dataset(cfg, opt);
          else throw ConfigError("unknown stage '" + stage + "'");
        }
        py::list l;
        for (const auto& s : out) l.append(summary_dict(s));
        return l;
      },
      py::arg("stage"), py::arg("config"), py::arg("force") = false, py::arg("workers") = std::nullopt,
      py::arg("seed") = std::nullopt);

  m.def(
      "check_dataset",
      [](const std::filesystem::path& out_dir) {
        const auto c = check_dataset(out_dir);
        py::dict d;
        d["ok"] = c.ok;
        d["message"] = c.message;
        d["images"] = c.images;
        d["records"] = c.records;
        return d;
      },
      py::arg("out_dir"));
}
