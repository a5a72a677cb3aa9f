#include "tengrid/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tg {

namespace {

int g_threads = [] {
  if (const char* env = std::getenv("TENGRID_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}();

}  // namespace

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

void parallel_for(index_t n, const std::function<void(index_t, index_t)>& fn) {
  const int nt = std::min<index_t>(g_threads, std::max<index_t>(n, 1));
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const index_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const index_t lo = t * chunk;
    const index_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back(fn, lo, hi);
  }
  for (auto& w : workers) w.join();
}

}  // namespace tg
