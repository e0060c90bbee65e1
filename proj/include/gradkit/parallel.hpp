#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace gradkit {

/// Worker count: GRADKIT_THREADS if set to a positive integer, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("GRADKIT_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [begin, end) over contiguous chunks. fn must only write state owned by i.
template <typename Fn>
void parallel_for(Eigen::Index begin, Eigen::Index end, Fn&& fn) {
  const Eigen::Index total = end - begin;
  const unsigned workers = static_cast<unsigned>(std::min<Eigen::Index>(worker_count(), std::max<Eigen::Index>(total / 16, 1)));
  if (workers <= 1) {
    for (Eigen::Index i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const Eigen::Index chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const Eigen::Index lo = begin + w * chunk, hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (Eigen::Index i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gradkit
