#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "smallness/subset.hpp"

namespace smallness {

inline int default_workers() {
  if (const char* env = std::getenv("SMALLNESS_LAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Smallest mask in [0, full] satisfying pred, swept in contiguous chunks.
// Result is independent of the worker count.
template <typename Pred>
std::optional<Mask> first_mask_where(Mask full, Pred&& pred, int workers = 0) {
  if (workers <= 0) workers = default_workers();
  unsigned long long count = static_cast<unsigned long long>(full) + 1;
  if (workers == 1 || count < 4096) {
    for (Mask u = 0;; ++u) {
      if (pred(u)) return u;
      if (u == full) break;
    }
    return std::nullopt;
  }
  std::vector<std::optional<Mask>> found(workers);
  std::vector<std::thread> threads;
  unsigned long long chunk = count / workers + 1;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      unsigned long long lo = static_cast<unsigned long long>(w) * chunk;
      unsigned long long hi = std::min(count, lo + chunk);
      for (unsigned long long u = lo; u < hi; ++u) {
        if (pred(static_cast<Mask>(u))) {
          found[w] = static_cast<Mask>(u);
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  std::optional<Mask> best;
  for (auto& f : found)
    if (f && (!best || *f < *best)) best = f;
  return best;
}

}  // namespace smallness
