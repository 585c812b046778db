#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace qperc {

// Runs fn(trial) for every trial in [0, trials), split into contiguous chunks
// across threads. Callers write per-trial results into preallocated slots and
// reduce sequentially afterwards, so aggregates are independent of the thread
// count.
inline void for_each_trial(long trials, int threads,
                           const std::function<void(long)>& fn) {
  if (trials <= 0) return;
  if (threads < 1) threads = 1;
  if (threads == 1 || trials < 2 * threads) {
    for (long t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const long chunk = (trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const long begin = w * chunk;
    const long end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (long t = begin; t < end; ++t) fn(t);
    });
  }
  for (std::thread& th : pool) th.join();
}

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace qperc
