#include "vidomit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vidomit {

namespace {

std::atomic<int> g_workers{0};

int default_workers() {
  if (const char* env = std::getenv("VIDOMIT_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

int worker_count() {
  const int n = g_workers.load(std::memory_order_relaxed);
  return n >= 1 ? n : default_workers();
}

void set_worker_count(int n) { g_workers.store(n, std::memory_order_relaxed); }

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = worker_count();
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }

  std::atomic<std::int64_t> cursor{begin};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::int64_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= end) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vidomit
