#pragma once

// Stand-in generator for the external render protocol: answers every request
// in batch.json with 255 - 255 * edge, in a shuffled order.

#include <atomic>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <vector>
#include <thread>

namespace testsupport {

struct EchoStubOptions {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  unsigned shuffle_seed = 1;
  std::set<std::string> drop;       ///< never answered
  std::set<std::string> fail;       ///< answered with .err
  std::set<std::string> wrong_size; ///< answered with a 128x128 image
  int delay_ms = 0;                 ///< pause between answers
};

/// Serves one batch on a background thread; joins on destruction.
class EchoInvertStub {
 public:
  explicit EchoInvertStub(EchoStubOptions opt);
  ~EchoInvertStub();

  EchoInvertStub(const EchoInvertStub&) = delete;
  EchoInvertStub& operator=(const EchoInvertStub&) = delete;

  /// Request ids in the order they were answered.
  std::vector<std::string> completion_order() const;

 private:
  void serve();

  EchoStubOptions opt_;
  std::atomic<bool> stop_{false};
  mutable std::mutex mu_;
  std::vector<std::string> order_;
  std::thread thread_;
};

}  // namespace testsupport
