#pragma once

#include <cstddef>
#include <functional>

namespace demoswarm {

/// Worker count: DEMOSWARM_WORKERS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(0..n-1) across worker threads. Each index is processed exactly once;
/// the first exception thrown is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace demoswarm
