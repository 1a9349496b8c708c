#pragma once

#include <cstdint>
#include <functional>

namespace noisytd {

// Worker count: min(NOISYTD_THREADS, hardware), at least 1. A cap of 0/unset
// means "hardware concurrency".
int worker_count();

// Runs fn(task) for task in [0, n) on up to worker_count() threads. Each task
// index is processed by exactly one thread; results must be written to
// per-task slots so the outcome is independent of the worker count.
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& fn);

// Chunked variant for big flat ranges: fn(begin, end) over fixed-size chunks.
// Chunk boundaries depend only on n, never on the worker count.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace noisytd
