#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace bellbound {

// Thread budget: BELLBOUND_THREADS caps parallelism; unset/invalid falls back
// to the hardware count. Results never depend on the budget — tasks are
// independent and merged by index.
inline int thread_budget() {
  if (const char* env = std::getenv("BELLBOUND_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::min(count, thread_budget());
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

}  // namespace bellbound
