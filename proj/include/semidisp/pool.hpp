#pragma once

#include <cstddef>
#include <functional>

namespace semidisp {

// Worker count: SEMIDISP_THREADS if set, else hardware concurrency.
int pool_threads();

// Runs job(i) for i in [0, count); results are the caller's to place by index.
// The first exception thrown by any job is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace semidisp
