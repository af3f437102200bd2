#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace hetrec {

/// Worker thread count: hardware concurrency, capped by the HETREC_THREADS
/// environment variable when set. Always at least 1.
inline int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw > 0 ? static_cast<int>(hw) : 1;
  if (const char* env = std::getenv("HETREC_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = static_cast<int>(std::min<long>(n, cap));
  }
  return n;
}

/// Runs f(i) for i in [0, n). Iterations must be independent; each writes only
/// its own output slot, so parallel and sequential execution are bit-identical.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hetrec
