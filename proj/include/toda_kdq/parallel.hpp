#pragma once

#include <cstddef>
#include <functional>

namespace toda_kdq {

// Worker count: hardware concurrency, capped by TODA_KDQ_THREADS when set.
int thread_cap();

// Calls body(i) for i in [0, count), possibly concurrently.  Callers write
// results into per-index slots so the outcome does not depend on scheduling.
// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace toda_kdq
