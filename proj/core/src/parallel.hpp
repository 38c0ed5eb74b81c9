#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ruinalloc::detail {

// Paths are processed in fixed blocks; each block writes into its own slot and
// blocks are later combined in a fixed pairwise order, so results do not
// depend on thread count or scheduling.
inline constexpr std::uint64_t kBlockPaths = 8192;

template <class Block, class Fn>
std::vector<Block> run_blocks(std::uint64_t paths, int workers, Fn&& fn) {
  const std::uint64_t nblocks = (paths + kBlockPaths - 1) / kBlockPaths;
  std::vector<Block> blocks(nblocks);

  int nworkers = workers > 0 ? workers
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (nworkers < 1) nworkers = 1;
  nworkers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(nworkers), nblocks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      const std::uint64_t first = b * kBlockPaths;
      const std::uint64_t count = std::min(kBlockPaths, paths - first);
      try {
        blocks[b] = fn(first, count);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (nworkers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(nworkers));
    for (int i = 0; i < nworkers; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return blocks;
}

// Pairwise tree reduction over [lo, hi); the combination order is a pure
// function of the block count, independent of how blocks were produced.
template <class Block, class Combine>
Block reduce_range(std::vector<Block>& blocks, std::size_t lo, std::size_t hi,
                   Combine&& combine) {
  if (hi - lo == 1) return std::move(blocks[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  Block left = reduce_range(blocks, lo, mid, combine);
  Block right = reduce_range(blocks, mid, hi, combine);
  combine(left, right);
  return left;
}

template <class Block, class Combine>
Block pairwise_reduce(std::vector<Block> blocks, Combine&& combine) {
  return reduce_range(blocks, 0, blocks.size(), combine);
}

}  // namespace ruinalloc::detail
