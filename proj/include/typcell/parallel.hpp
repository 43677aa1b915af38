#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace typcell {

/// Worker count for a run: `requested` (0 = hardware concurrency), capped by
/// the TYPCELL_THREADS environment variable when it is set.
inline std::size_t resolve_worker_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
  }
  if (const char *cap = std::getenv("TYPCELL_THREADS")) {
    try {
      const long long v = std::stoll(cap);
      if (v >= 1) {
        n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
      }
    } catch (const std::exception &) {
      // Unparsable caps are ignored.
    }
  }
  return std::max<std::size_t>(n, 1);
}

/// Calls body(worker, i) for every i in [0, count). Indices are handed out in
/// chunks from a shared counter, so callers must only write to per-index or
/// per-worker state. The first exception thrown by any worker is rethrown.
template <class Body> void parallel_for(std::size_t count, std::size_t workers, Body &&body) {
  workers = std::max<std::size_t>(1, std::min(workers, count == 0 ? 1 : count));
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto run = [&](std::size_t worker) {
    try {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) {
          return;
        }
        const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
        if (begin >= count) {
          return;
        }
        const std::size_t end = std::min(count, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
          body(worker, i);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
      stop = true;
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(run, w);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

} // namespace typcell
