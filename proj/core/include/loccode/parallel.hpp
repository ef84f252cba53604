#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace loccode {

// LOCCODE_THREADS env var wins, then the explicit request, then
// hardware_concurrency (at least 1).
int resolve_thread_count(std::optional<int> requested = std::nullopt);

// fn(i) for every i in [0, count); results returned in index order no matter
// how work is scheduled, so downstream reductions are thread-count invariant.
// The first exception thrown by any task is rethrown after all workers join.
template <class R>
std::vector<R> parallel_map(std::size_t count, int threads,
                            const std::function<R(std::size_t)>& fn) {
  std::vector<std::optional<R>> slots(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i] = fn(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= count) return;
        try {
          slots[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace loccode
