#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cbf {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(worker, block, begin, end) over fixed-size blocks of [0, n).
// Block boundaries depend only on (n, block_size), never on the schedule, so
// callers can keep one result slot per block and merge the slots in block
// order afterwards: the reduction is then identical for any thread count.
template <class Fn>
void parallel_blocks(std::int64_t n, std::int64_t block_size, int threads, Fn&& fn) {
  if (n <= 0) return;
  const std::int64_t n_blocks = (n + block_size - 1) / block_size;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_thread_count(threads), n_blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      fn(0, b, b * block_size, std::min(n, (b + 1) * block_size));
    }
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](int worker) {
    try {
      for (;;) {
        const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= n_blocks) return;
        fn(worker, b, b * block_size, std::min(n, (b + 1) * block_size));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n_blocks, std::memory_order_relaxed);  // drain remaining work
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cbf
