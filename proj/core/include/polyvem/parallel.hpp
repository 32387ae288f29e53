#ifndef POLYVEM_PARALLEL_HPP
#define POLYVEM_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vem {

/// Thread budget: min(hardware, POLYVEM_THREADS if set).
inline int thread_budget() {
  int n = int(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("POLYVEM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

/// Runs fn(i) for i in [0, n). Work items must be independent and write only
/// to per-index slots so results are deterministic regardless of the budget.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int nthreads = std::min(thread_budget(), n);
  if (nthreads <= 1 || n < 32) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const int chunk = (n + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn]() {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace vem

#endif
