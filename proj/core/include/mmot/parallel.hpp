#pragma once

#include <cstddef>
#include <functional>

namespace mmot {

/// Resolves a requested thread count: 0 means "all hardware threads",
/// anything else is clamped to [1, hardware].
int effective_threads(int requested);

/// Runs fn(begin, end) over a partition of [0, n) on `threads` threads.
/// Chunks are contiguous, so writes to per-index slots race-free; results
/// do not depend on the thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace mmot
