#pragma once

#include <cstddef>
#include <functional>

namespace rosce {

/// Worker count from the ROSCE_THREADS environment variable, else the
/// hardware concurrency (at least 1).
int default_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers (<= 0 means
/// default_thread_count()). Bodies must write only to slots owned by i. If
/// any body throws, the exception of the lowest failing index is rethrown
/// after all workers stop, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace rosce
