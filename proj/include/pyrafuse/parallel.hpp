#pragma once

#include <cstddef>
#include <functional>

namespace pyrafuse {

/// Worker count for parallel loops. Reads PYRAFUSE_THREADS once; 0, unset or
/// unparsable means one worker per hardware thread.
std::size_t worker_count();

/// Overrides the worker count for the rest of the process (0 = auto).
void set_worker_count(std::size_t workers);

/// Runs `body(i)` for every i in [0, n). Work is split into contiguous
/// chunks; `body` must only write state owned by index i, which keeps
/// results identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pyrafuse
