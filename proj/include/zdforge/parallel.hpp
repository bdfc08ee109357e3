#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace zdforge {

// Worker cap: ZDFORGE_THREADS when set, hardware concurrency otherwise.
inline int max_workers() {
  static const int cached = [] {
    if (const char* env = std::getenv("ZDFORGE_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }();
  return cached;
}

// Runs fn(i) for i in [0, count). Each item must write only to its own
// output slot; results are then independent of the thread schedule.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = std::min(max_workers(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace zdforge
