#pragma once

#include <functional>

#include "tengrid/common.hpp"

namespace tg {

/// Global worker count for the few internally parallel loops.
/// Results are deterministic for a fixed thread count (fixed partitioning,
/// per-thread compensated accumulation, ordered combination).
void set_num_threads(int n);
int num_threads();

/// Runs fn(begin, end) over a fixed partition of [0, n).
void parallel_for(index_t n, const std::function<void(index_t, index_t)>& fn);

}  // namespace tg
