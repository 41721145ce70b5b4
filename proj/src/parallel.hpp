#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bilinop::detail {

/// Runs body(i) for i in [0, count) on a few threads. Work is split into
/// contiguous chunks, so results that are written per-index are identical
/// to the serial order regardless of thread count.
inline void parallelFor(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(hw == 0 ? 1 : hw, count);
  if (workers <= 1 || count < 16) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bilinop::detail
