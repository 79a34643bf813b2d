#include "magweyl/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace magweyl {

int thread_count() {
  static int cached = [] {
    if (const char* env = std::getenv("MAGWEYL_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
  }();
  return cached;
}

void parallel_for(long begin, long end, const std::function<void(long)>& body) {
  const long total = end - begin;
  if (total <= 0) return;
  const int nt = std::min<long>(thread_count(), total);
  if (nt <= 1) {
    for (long i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const long chunk = (total + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const long lo = begin + t * chunk;
    const long hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &body] {
      for (long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace magweyl
