#include "echo_stub.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>

#include <json.hpp>

#include "palmforge/png_io.hpp"

namespace testsupport {

namespace fs = std::filesystem;

EchoInvertStub::EchoInvertStub(EchoStubOptions opt) : opt_(std::move(opt)) {
  thread_ = std::thread([this] { serve(); });
}

EchoInvertStub::~EchoInvertStub() {
  stop_ = true;
  thread_.join();
}

std::vector<std::string> EchoInvertStub::completion_order() const {
  std::lock_guard lock(mu_);
  return order_;
}

void EchoInvertStub::serve() {
  const fs::path batch = opt_.input_dir / "batch.json";
  while (!stop_ && !fs::exists(batch)) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (stop_) return;

  nlohmann::json reqs;
  {
    std::ifstream in(batch);
    reqs = nlohmann::json::parse(in);
  }
  std::vector<std::pair<std::string, std::string>> todo;
  for (const auto& r : reqs) todo.emplace_back(r.at("request_id"), r.at("edge_path"));
  std::mt19937 rng(opt_.shuffle_seed);
  std::shuffle(todo.begin(), todo.end(), rng);

  fs::create_directories(opt_.output_dir);
  for (const auto& [id, edge_path] : todo) {
    if (stop_) return;
    if (opt_.delay_ms) std::this_thread::sleep_for(std::chrono::milliseconds(opt_.delay_ms));
    if (opt_.drop.contains(id)) continue;
    if (opt_.fail.contains(id)) {
      {
        std::lock_guard lock(mu_);
        order_.push_back(id);
      }
      std::ofstream(opt_.output_dir / (id + ".err")) << "stub refused " << id;
      continue;
    }
    const palmforge::EdgeMap edge = palmforge::read_png_edge(opt_.input_dir / edge_path);
    palmforge::GrayImage img(edge.width(), edge.height());
    for (int y = 0; y < edge.height(); ++y)
      for (int x = 0; x < edge.width(); ++x) img(x, y) = static_cast<std::uint8_t>(255 - 255 * edge(x, y));
    if (opt_.wrong_size.contains(id)) img = palmforge::GrayImage(128, 128, 7);
    palmforge::write_png_gray(opt_.output_dir / (id + ".png"), img);
    {
      std::lock_guard lock(mu_);
      order_.push_back(id);
    }
    std::ofstream(opt_.output_dir / (id + ".done"));
  }
}

}  // namespace testsupport
