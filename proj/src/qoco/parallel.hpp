#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qoco {

/// Fixed-size pool that runs `fn(begin, end)` over a static partition of
/// [0, count). The partition depends only on `count` and the worker count,
/// so results written per index are reproducible. An exception thrown by
/// any chunk is rethrown on the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const { return static_cast<unsigned>(threads_.size()) + 1; }

  void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

 private:
  void worker_loop(unsigned id);

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0;
  unsigned long generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace qoco
