// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace segmap {

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n) on a
/// small worker pool. Chunk boundaries depend only on n and chunk_size, so
/// callers that write per-chunk results and reduce them in chunk order get
/// the same answer for any thread count.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk_size, Fn&& fn, unsigned threads = 0) {
  if (n == 0) return;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = chunks;
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
}

}  // namespace segmap
