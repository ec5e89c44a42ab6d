#pragma once

#include <cstdint>
#include <functional>

namespace vidomit {

/// Worker count used by parallel_for. Defaults to the VIDOMIT_WORKERS
/// environment variable when set, otherwise hardware concurrency.
int worker_count();

/// Overrides the worker count for this process (0 restores the default).
void set_worker_count(int n);

/// Runs fn(i) for every i in [begin, end). Iterations must be independent;
/// the result is required to be identical to sequential execution, so fn may
/// only write to its own slot of preallocated output.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace vidomit
