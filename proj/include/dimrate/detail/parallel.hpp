#pragma once

#include <cstddef>
#include <functional>

namespace dimrate::detail {

// Worker count: hardware concurrency capped by DIMRATE_THREADS (if set).
std::size_t worker_count();

// Runs body(i) for i in [0, count). Exceptions from workers are rethrown
// (the first one by index) after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dimrate::detail
