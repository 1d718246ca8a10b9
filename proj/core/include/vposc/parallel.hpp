#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace vposc {

/// Index range [begin, end) handled by worker `index` when n items are split
/// into `workers` contiguous blocks.
struct Chunk {
  std::size_t begin;
  std::size_t end;
};

inline Chunk chunk_of(std::size_t n, int workers, int index) {
  const auto w = static_cast<std::size_t>(workers);
  const auto i = static_cast<std::size_t>(index);
  const std::size_t base = n / w;
  const std::size_t extra = n % w;
  const std::size_t begin = i * base + std::min(i, extra);
  return {begin, begin + base + (i < extra ? 1 : 0)};
}

/// Runs fn(worker, begin, end) over contiguous blocks.  Worker 0 runs on the
/// calling thread; with workers <= 1 no threads are spawned.
template <class Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < static_cast<std::size_t>(workers)) {
    fn(0, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers - 1));
  for (int k = 1; k < workers; ++k) {
    threads.emplace_back([&fn, n, workers, k] {
      const Chunk c = chunk_of(n, workers, k);
      fn(k, c.begin, c.end);
    });
  }
  const Chunk c0 = chunk_of(n, workers, 0);
  fn(0, c0.begin, c0.end);
}

}  // namespace vposc
