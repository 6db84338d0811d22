#pragma once

#include <cstddef>

namespace frontlab::parallel {

/// Applies the FRONTLAB_THREADS cap, if set, and returns the resulting
/// OpenMP thread count.
int configure_from_env();
int max_threads();
void set_threads(int n);

/// Reductions are split into fixed-size blocks whose partial sums are added
/// in block order, so results do not depend on the thread count.
inline constexpr std::size_t kReductionBlock = 1024;

/// Loops shorter than this run on one thread.
inline constexpr std::size_t kParallelThreshold = 2048;

}  // namespace frontlab::parallel
