#include "palmforge/parallel.hpp"

#include <algorithm>
#include <limits>

#include "palmforge/error.hpp"

namespace palmforge {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)),
                                               std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  if (nw == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

OrderedLineWriter::OrderedLineWriter(const std::string& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  thread_ = std::thread([this] { run(); });
}

OrderedLineWriter::~OrderedLineWriter() {
  {
    std::lock_guard lock(mu_);
    closing_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void OrderedLineWriter::submit(std::size_t index, std::string line) {
  {
    std::lock_guard lock(mu_);
    pending_.emplace(index, std::move(line));
  }
  cv_.notify_all();
}

void OrderedLineWriter::run() {
  std::unique_lock lock(mu_);
  for (;;) {
    cv_.wait(lock, [&] { return closing_ || pending_.contains(next_); });
    while (!pending_.empty() && pending_.begin()->first == next_) {
      std::string line = std::move(pending_.begin()->second);
      pending_.erase(pending_.begin());
      ++next_;
      lock.unlock();
      out_ << line << '\n';
      lock.lock();
    }
    cv_.notify_all();
    if (closing_) return;
  }
}

void OrderedLineWriter::finish(std::size_t count) {
  // Callers submit everything before finishing, so once the next line is not
  // pending the writer can make no further progress.
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !pending_.contains(next_); });
    closing_ = true;
  }
  cv_.notify_all();
  thread_.join();
  const bool complete = next_ == count && pending_.empty();
  out_.close();
  if (!complete) throw IoError("'" + path_ + "': manifest has missing or extra lines");
  if (!out_) throw IoError("write to '" + path_ + "' failed");
}

}  // namespace palmforge
