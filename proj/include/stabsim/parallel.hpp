#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace stabsim {

// Runs fn(i) for i in [0, n). Each index is an independent unit of work and
// results must be written into per-index slots, so the output is identical
// for every thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t t = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t w = 0; w < t; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace stabsim
