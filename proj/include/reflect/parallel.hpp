#pragma once

#include <cstddef>
#include <functional>

namespace reflect {

/// Worker count: REFLECT_MAXFILTER_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Work is
/// split into contiguous chunks; callers write results into slot i so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace reflect
