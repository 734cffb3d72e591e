#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace delaymp {

/// Process-wide worker count used by every path-parallel loop. Results never
/// depend on it: loops write to disjoint per-path slots and all cross-path
/// reductions run in path-index order.
int worker_count() noexcept;
void set_worker_count(int workers);

class ScopedWorkers {
 public:
  explicit ScopedWorkers(int workers) : saved_(worker_count()) { set_worker_count(workers); }
  ~ScopedWorkers() { set_worker_count(saved_); }
  ScopedWorkers(const ScopedWorkers&) = delete;
  ScopedWorkers& operator=(const ScopedWorkers&) = delete;

 private:
  int saved_;
};

/// Calls body(begin, end) on contiguous chunks of [0, n). If several chunks
/// throw, the exception from the lowest chunk is rethrown, so the reported
/// failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto workers = static_cast<std::size_t>(worker_count());
  if (workers <= 1 || n < 2) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunks = workers < n ? workers : n;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    pool.emplace_back([&, c, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace delaymp
