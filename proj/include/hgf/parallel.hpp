#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hgf {

/// Process-wide worker count for per-node loops (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, count) over contiguous blocks, one block per
/// worker. Each index is visited exactly once, so results written to
/// per-index slots do not depend on the worker count. The first exception
/// (lowest block) is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, thread_count()));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t blocks = std::min(workers, count);
  std::vector<std::exception_ptr> errors(blocks);
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = count * b / blocks;
    const std::size_t end = count * (b + 1) / blocks;
    pool.emplace_back([&, b, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hgf
