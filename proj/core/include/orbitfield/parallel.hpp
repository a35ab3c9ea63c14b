#pragma once

#include <cstddef>
#include <functional>

namespace orbitfield {

// Worker count: hardware concurrency, capped by ORBITFIELD_THREADS when set.
int worker_count();

// Calls body(i) for i in [0, n). Each index runs exactly once; callers write
// results into per-index slots so output never depends on scheduling.
// Nested calls run sequentially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace orbitfield
