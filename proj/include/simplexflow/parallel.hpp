#pragma once

#include <cstddef>
#include <functional>

namespace simplexflow {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
// handed out statically (item i goes to worker i % threads) so that any
// per-item output is independent of the thread count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Thread count from SIMPLEXFLOW_THREADS, falling back to 1.
int default_thread_count();

}  // namespace simplexflow
