#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace poisson::detail {

/// Rows per work item. Fixed, so the partition of the mesh never depends on the number of
/// threads; combined with per-row arithmetic that keeps outputs bitwise reproducible.
inline constexpr std::size_t kTileRows = 4096;

inline unsigned resolve_workers(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Calls fn(begin, end) on consecutive row tiles, possibly from several threads.
template <typename Fn>
void for_each_tile(std::size_t rows, unsigned workers, Fn&& fn) {
  const std::size_t tiles = (rows + kTileRows - 1) / kTileRows;
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), tiles));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tiles; ++t)
      fn(t * kTileRows, std::min(rows, (t + 1) * kTileRows));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tiles) return;
      fn(t * kTileRows, std::min(rows, (t + 1) * kTileRows));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace poisson::detail
