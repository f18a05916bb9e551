#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace brownopt {

/// Runs task(i) for i in [0, n) on up to `jobs` threads, pulling indices
/// from a shared counter.  Callers write results into preallocated
/// per-index slots, so output is independent of scheduling.
template <typename Task>
void parallel_for(std::int64_t n, int jobs, Task&& task) {
  if (n <= 0) return;
  const int workers = static_cast<int>(
      std::min<std::int64_t>(std::max(jobs, 1), n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace brownopt
