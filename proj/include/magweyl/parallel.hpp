#pragma once

#include <functional>

namespace magweyl {

/// Number of worker threads; honors the MAGWEYL_THREADS environment
/// variable, defaulting to the hardware concurrency.
int thread_count();

/// Runs body(i) for i in [begin, end) across the worker pool.  The index
/// space is split into contiguous static chunks so that any per-thread
/// accumulation merged in chunk order stays deterministic.
void parallel_for(long begin, long end, const std::function<void(long)>& body);

}  // namespace magweyl
