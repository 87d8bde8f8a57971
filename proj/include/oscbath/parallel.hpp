// parallel.hpp: minimal static-partition parallel loop.

#pragma once

#include <cstddef>
#include <functional>

namespace oscbath {

// Number of worker threads used by parallel_for (default 1).
void set_thread_count(int n);
int thread_count();

// Calls body(i) for i in [0, n). Each index is visited exactly once; results
// written to disjoint slots are deterministic regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace oscbath
