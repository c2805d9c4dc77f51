#pragma once

// Minimal parallel-for over an index range. Thread count defaults to the
// hardware concurrency and is capped by the ADFAM_MAX_THREADS environment
// variable; results must not depend on the split (workers write disjoint
// slots or reduce associatively).

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace adfam {

inline int max_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("ADFAM_MAX_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

// Calls fn(i) for every i in [0, n), partitioned into contiguous blocks.
inline void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
  int workers = max_threads();
  if (workers <= 1 || n < 2 * workers) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int64_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace adfam
