#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fnsc {

/// Worker count for pointwise kernels: hardware concurrency, capped by the
/// FNSC_THREADS environment variable when it is set to a positive integer.
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks and calls fn(begin, end) on each.
/// Chunks are disjoint, so kernels that write only their own range are
/// bitwise deterministic regardless of the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  constexpr std::size_t kMinChunk = 8192;
  const std::size_t workers = std::min(worker_count(), (n + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace fnsc
