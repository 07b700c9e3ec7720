#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lmax {

/// Worker cap: --workers flag, LMAX_WORKERS env, then hardware.
inline int& worker_cap() {
  static int cap = [] {
    if (const char* e = std::getenv("LMAX_WORKERS")) {
      int v = std::atoi(e);
      if (v > 0) return v;
    }
    int hc = static_cast<int>(std::thread::hardware_concurrency());
    return hc > 0 ? hc : 1;
  }();
  return cap;
}

/// Data-parallel loop over [0, count) with disjoint writes; chunk layout is
/// fixed by count and the worker cap, results independent of scheduling.
inline void parallel_for(long long count, const std::function<void(long long, long long)>& body) {
  int workers = std::max(1, worker_cap());
  if (workers == 1 || count < 1024) {
    body(0, count);
    return;
  }
  long long chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    long long lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lmax
