#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace palmforge {

/// Runs fn(i) for i in [0, count) on `workers` threads pulling indices from a
/// shared counter. If any call throws, the exception from the lowest index is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Single writer for a JSONL file. Workers submit (index, line) in any order;
/// a dedicated thread appends lines strictly in index order.
class OrderedLineWriter {
 public:
  explicit OrderedLineWriter(const std::string& path);
  ~OrderedLineWriter();

  OrderedLineWriter(const OrderedLineWriter&) = delete;
  OrderedLineWriter& operator=(const OrderedLineWriter&) = delete;

  void submit(std::size_t index, std::string line);
  /// Waits until `count` lines are written, then closes the file.
  /// Throws IoError if lines are missing or the write failed.
  void finish(std::size_t count);

 private:
  void run();

  std::ofstream out_;
  std::string path_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::size_t, std::string> pending_;
  std::size_t next_ = 0;
  bool closing_ = false;
  std::thread thread_;
};

}  // namespace palmforge
