#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace ealab {

/// Number of worker threads for batch operations: the override if set,
/// otherwise EA_LAB_THREADS, otherwise the hardware concurrency.
std::size_t worker_count();

/// Process-wide override of worker_count(); std::nullopt restores the default.
void set_worker_limit(std::optional<std::size_t> limit);

/// Calls body(i) for i in [0, n) across worker threads. Each index is visited
/// exactly once; callers write results into slot i so the output order never
/// depends on scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ealab
