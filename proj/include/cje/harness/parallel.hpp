#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cje/rng.hpp"

namespace cje::harness {

/// results[i] = f(i, rng_i) with rng_i = SeededRng(seed, derive_stream(stream, i)).
///
/// Work is spread over `threads` workers; the output order and every draw
/// depend only on (seed, stream, i), so results do not depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
template <class T, class F>
std::vector<T> parallel_samples(std::size_t count, std::uint64_t seed, std::uint64_t stream,
                                int threads, F&& f) {
  std::vector<T> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        SeededRng rng(seed, derive_stream(stream, i));
        results[i] = f(i, rng);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace cje::harness
