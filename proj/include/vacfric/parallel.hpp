#pragma once

#include <cstddef>
#include <functional>

namespace vacfric {

// Worker count for a request of `requested` (0 means hardware concurrency).
int resolve_workers(int requested);

// Runs body(i) for i in [0, count) on up to `workers` threads; the first exception is rethrown.
// Each index is processed exactly once, so results written per index are independent of the schedule.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace vacfric
