#pragma once

#include <cstddef>
#include <functional>

namespace tcsde {

// Worker count: TCSDE_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, n) on thread_count() workers. Each index must
// write only to its own output slot; results are then independent of
// scheduling. The exception thrown by the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tcsde
