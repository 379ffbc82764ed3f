#ifndef SKEWMIX_PARALLEL_HPP
#define SKEWMIX_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace skewmix {

/// Runs fn(task) for task in [0, tasks) on up to `workers` threads.
/// Tasks must write only to their own output slots; callers reduce in task
/// order afterwards. The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t tasks, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || tasks <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const std::size_t count = std::min<std::size_t>(workers, tasks);
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pool.emplace_back(body);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace skewmix

#endif  // SKEWMIX_PARALLEL_HPP
