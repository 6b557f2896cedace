#pragma once
/// @file parallel.hpp
/// @brief Deterministic fork-join helper capped by VELAVG_THREADS.

#include <cstddef>
#include <functional>

namespace velavg {

/// Number of worker threads: VELAVG_THREADS if set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
unsigned thread_count();

/// Calls body(i) for every i in [0, n). Work is split into contiguous static
/// chunks, so any output written by index is independent of the thread count.
/// The first exception thrown by any chunk is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace velavg
