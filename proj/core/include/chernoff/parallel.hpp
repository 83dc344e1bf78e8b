#pragma once

#include <cstddef>
#include <functional>

namespace chernoff {

// Worker count from CHERNOFF_WORKERS, else hardware concurrency.
unsigned worker_count();

// Runs body(begin, end) over fixed contiguous chunks of [0, n). Each index is
// handled by exactly one call, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 2048);

}  // namespace chernoff
