#pragma once

#include <cstddef>
#include <functional>

namespace roesser {

/// Worker count: ROESSER_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Calls body(i) for i in [0, n) across worker threads. The caller stores
/// per-index results and reduces them in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace roesser
