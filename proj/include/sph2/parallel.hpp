#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace sph2::detail {

/// Runs fn(i) for i in [0, count) on up to n_threads workers (0 = one per
/// hardware thread). Work items must be independent; the first exception,
/// by item index, is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned n_threads = 0) {
  if (count == 0) return;
  unsigned workers = n_threads == 0 ? std::thread::hardware_concurrency() : n_threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));

  std::vector<std::exception_ptr> failures(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < count; i += workers) {
          try {
            fn(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace sph2::detail
