#pragma once

#include <cstddef>
#include <functional>

namespace mdrlab::cli {

/// Worker count: MDRLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency; never more than `tasks`.
std::size_t worker_count(std::size_t tasks);

/// Runs body(i) for i in [0, n) on worker_count(n) threads. Each index writes
/// only its own result slot, so output order does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mdrlab::cli
