#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bakerlab {

/// Caps the number of worker threads used by grid evaluations and
/// column-wise operator evolution. 0 restores the hardware default.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// work is split into contiguous blocks so results written by index are
/// independent of the number of threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, which keeps sums bit-stable across thread counts.
double pairwise_sum(std::span<const double> values);

}  // namespace bakerlab
