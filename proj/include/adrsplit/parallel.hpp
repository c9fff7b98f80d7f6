#pragma once

#include <cstddef>
#include <functional>

namespace adrsplit {

/// Number of workers used by line sweeps. Defaults to 1.
int worker_count();
void set_worker_count(int workers);

/// Runs body(k) for k in [0, count). Work is split into contiguous blocks,
/// one per worker; each index is visited exactly once, so results that are
/// written to disjoint slices do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace adrsplit
