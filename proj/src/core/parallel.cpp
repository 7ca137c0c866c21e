#include "covf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace covf::par {

int max_threads() {
  if (const char* env = std::getenv("COVFOURIER_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long long begin, long long end,
                  const std::function<void(long long)>& fn) {
  const long long total = end - begin;
  if (total <= 0) return;
  const int workers = std::min<long long>(max_threads(), total);
  if (workers <= 1) {
    for (long long i = begin; i < end; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long long chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long lo = begin + w * chunk;
    const long long hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (long long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace covf::par
