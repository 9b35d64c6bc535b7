#include "qoco/parallel.hpp"

#include <algorithm>

namespace qoco {
namespace {

std::pair<std::size_t, std::size_t> chunk(std::size_t count, unsigned parts, unsigned id) {
  const std::size_t base = count / parts;
  const std::size_t extra = count % parts;
  const std::size_t begin = id * base + std::min<std::size_t>(id, extra);
  return {begin, begin + base + (id < extra ? 1 : 0)};
}

}  // namespace

WorkerPool::WorkerPool(unsigned workers) {
  workers = std::max(1u, workers);
  for (unsigned id = 1; id < workers; ++id) threads_.emplace_back([this, id] { worker_loop(id); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (threads_.empty() || count == 1) {
    fn(0, count);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    count_ = count;
    pending_ = static_cast<unsigned>(threads_.size());
    ++generation_;
  }
  start_cv_.notify_all();

  std::exception_ptr local_error;
  const auto [begin, end] = chunk(count, size(), 0);
  try {
    if (begin < end) fn(begin, end);
  } catch (...) {
    local_error = std::current_exception();
  }

  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [this] { return pending_ == 0; });
  job_ = nullptr;
  std::exception_ptr error = local_error ? local_error : error_;
  error_ = nullptr;
  lock.unlock();
  if (error) std::rethrow_exception(error);
}

void WorkerPool::worker_loop(unsigned id) {
  unsigned long seen = 0;
  for (;;) {
    const std::function<void(std::size_t, std::size_t)>* job = nullptr;
    std::size_t count = 0;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
      count = count_;
    }
    const auto [begin, end] = chunk(count, size(), id);
    std::exception_ptr error;
    try {
      if (begin < end) (*job)(begin, end);
    } catch (...) {
      error = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      if (error && !error_) error_ = error;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

}  // namespace qoco
