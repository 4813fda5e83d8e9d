#pragma once

#include <cstddef>
#include <functional>

namespace simplexia {

/// Worker count: hardware concurrency, capped by SIMPLEXIA_THREADS when set to a
/// positive integer. Never less than one.
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Bodies must write
/// only to their own slot. If any body throws, the exception of the smallest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace simplexia
