#include "delaymp/core/parallel.hpp"

#include <atomic>

namespace delaymp {

namespace {
std::atomic<int> g_workers{1};
}

int worker_count() noexcept { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(int workers) {
  g_workers.store(workers < 1 ? 1 : workers, std::memory_order_relaxed);
}

}  // namespace delaymp
