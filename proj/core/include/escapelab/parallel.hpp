#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace escapelab {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel reduction. Items are cut into fixed-size blocks;
// each block folds into its own accumulator, and block accumulators are
// merged in block order. Because the block layout does not depend on the
// worker count, floating-point accumulations give bit-identical results
// for any number of threads. The first exception thrown by per_item is
// rethrown on the calling thread.
//
//   per_item: void(Acc&, std::int64_t index)
//   merge:    void(Acc&, Acc&&)
template <class Acc, class PerItem, class Merge>
Acc block_parallel_reduce(std::int64_t n_items, const Acc& init, PerItem per_item, Merge merge,
                          int workers = 0, std::int64_t block_size = 4096) {
  if (n_items <= 0) return init;
  const std::int64_t n_blocks = (n_items + block_size - 1) / block_size;
  std::vector<Acc> partials(static_cast<std::size_t>(n_blocks), init);

  std::atomic<std::int64_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::int64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const std::int64_t lo = b * block_size;
      const std::int64_t hi = std::min(lo + block_size, n_items);
      Acc& acc = partials[static_cast<std::size_t>(b)];
      try {
        for (std::int64_t i = lo; i < hi; ++i) per_item(acc, i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), n_blocks));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  Acc out = std::move(partials[0]);
  for (std::int64_t b = 1; b < n_blocks; ++b) merge(out, std::move(partials[static_cast<std::size_t>(b)]));
  return out;
}

}  // namespace escapelab
