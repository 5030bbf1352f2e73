#include "bi3d/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bi3d {

namespace {
std::atomic<int> g_override{-1};  // -1 = not set
thread_local bool t_in_parallel = false;

int env_threads() {
  const char* env = std::getenv("BI3D_THREADS");
  if (!env) return 0;
  return std::atoi(env);
}
}  // namespace

void set_thread_override(int n) { g_override.store(n < 0 ? -1 : n); }

int thread_count() {
  int n = g_override.load();
  if (n < 0) n = env_threads();
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
  const int items = end - begin;
  if (items <= 0) return;
  int workers = thread_count();
  if (workers > items) workers = items;
  // Nested regions run serially; the outer loop already owns the workers.
  if (workers <= 1 || t_in_parallel) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<int> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      t_in_parallel = true;
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= end) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bi3d
