#pragma once

#include <cstddef>
#include <functional>

namespace liouville {

/// Worker count: hardware concurrency capped by LIOUVILLE_LAB_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index is handled exactly once; callers
/// write results to index-owned slots, so output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace liouville
