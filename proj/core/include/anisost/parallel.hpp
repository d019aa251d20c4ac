#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace anisost {

// requested > 0 wins, then ANISO_ST_THREADS, then hardware count.
inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("ANISO_ST_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Static chunking; body(i) must only write to slot i of its output so that
// results are independent of the thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  const unsigned nt = std::min<std::size_t>(resolve_threads(threads), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned w = 0; w < nt; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace anisost
