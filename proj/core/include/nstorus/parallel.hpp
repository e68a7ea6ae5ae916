#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nstorus {

// Runs fn(begin, end, worker_index) over contiguous chunks of [0, n) on up
// to `workers` threads. Chunks are fixed by n and workers alone, so results
// written by index are deterministic. The first exception thrown by any
// worker is rethrown.
inline void parallel_chunks(long n, int workers,
                            const std::function<void(long, long, int)>& fn) {
  workers = std::max(1, workers);
  if (n <= 0) return;
  const long chunk = (n + workers - 1) / workers;
  if (workers == 1 || n == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    const long lo = static_cast<long>(w) * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi, w] {
      try {
        fn(lo, hi, w);
      } catch (...) {
        std::scoped_lock lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nstorus
