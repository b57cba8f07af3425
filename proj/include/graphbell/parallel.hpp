#pragma once

#include <cstdint>
#include <functional>

namespace graphbell {

/// Resolves a worker count: a positive request wins, otherwise the
/// GRAPHBELL_WORKERS environment variable, otherwise the hardware
/// concurrency (at least 1).
int resolve_worker_count(int requested);

/// Runs fn(worker_index, begin, end) over contiguous chunks of [0, count)
/// on `workers` threads. With one worker the call runs inline.
void parallel_chunks(std::int64_t count, int workers,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn);

}  // namespace graphbell
