#pragma once

// Deterministic sample fan-out. Workers claim disjoint index chunks and write
// results into per-index slots; every reduction afterwards runs over the
// index order, so the output is bit-identical for any worker count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace recur {

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (static_cast<std::uint64_t>(workers) > count)
    workers = static_cast<unsigned>(count);

  const std::uint64_t chunk =
      std::max<std::uint64_t>(1, count / (static_cast<std::uint64_t>(workers) * 16));
  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&] {
    for (;;) {
      std::uint64_t lo = cursor.fetch_add(chunk);
      if (lo >= count) return;
      std::uint64_t hi = std::min(lo + chunk, count);
      try {
        for (std::uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace recur
