#pragma once

#include <cstddef>
#include <functional>

namespace dynamask {

// Calls fn(i) for every i in [0, count) using up to `jobs` threads
// (jobs <= 1 runs inline). Tasks must not share mutable state. If any task
// throws, the first exception is rethrown after all threads have joined.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

// Logical cores, at least 1.
std::size_t default_jobs();

}  // namespace dynamask
