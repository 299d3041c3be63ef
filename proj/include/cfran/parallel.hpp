// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cfran {

// Runs fn(0..count-1) on up to num_threads workers (0 = hardware count).
// Work is assigned by stride so the mapping of index to result slot is fixed;
// callers that write into pre-sized slots get bit-identical results for any
// thread count. The first exception is rethrown after all workers join.
inline void parallel_for(int count, int num_threads,
                         const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = num_threads > 0
                    ? num_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace cfran
