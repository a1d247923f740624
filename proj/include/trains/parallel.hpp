#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace trains {

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [begin, end). Each index is processed exactly once;
/// callers store per-index results, so the outcome is identical for any
/// worker count.
template <typename Fn>
void parallel_for(int begin, int end, int jobs, Fn&& fn) {
  const int n = end - begin;
  if (n <= 0) return;
  jobs = resolve_jobs(jobs);
  if (jobs <= 1 || n == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<int> next(begin);
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= end) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int workers = jobs < n ? jobs : n;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace trains
