#pragma once

#include <cstddef>
#include <functional>

namespace tccm {

// Worker count: TCCM_NUM_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
std::size_t thread_count();

// Splits [0, n) into contiguous chunks run on up to thread_count() threads.
// Callers must only touch per-row state, so results do not depend on the split.
void parallel_for_rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                       std::size_t min_rows_per_thread = 256);

}  // namespace tccm
