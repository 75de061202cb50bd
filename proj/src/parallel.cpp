#include "hgf/parallel.hpp"

#include <atomic>

#include "hgf/errors.hpp"

namespace hgf {
namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) {
  if (n < 1) throw InvalidInput("thread count must be at least 1");
  g_threads.store(n);
}

int thread_count() { return g_threads.load(); }

}  // namespace hgf
