#include "ealab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ealab {

namespace {

std::atomic<std::size_t> g_limit{0};  // 0 = no override

std::size_t env_limit() {
  const char* raw = std::getenv("EA_LAB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    long v = std::stol(raw);
    return v > 0 ? static_cast<std::size_t>(v) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::size_t worker_count() {
  if (std::size_t over = g_limit.load(); over > 0) return over;
  if (std::size_t env = env_limit(); env > 0) return env;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_limit(std::optional<std::size_t> limit) { g_limit.store(limit.value_or(0)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ealab
