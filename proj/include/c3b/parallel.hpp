#pragma once

#include <cstddef>
#include <functional>

namespace c3b {

/// Runs fn(i) for i in [0, n) on `jobs` threads (0 = hardware concurrency).
/// Work is handed out by index, so results stored per index do not depend on
/// scheduling. After all threads join, the exception of the lowest failing
/// index is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

unsigned default_jobs();

}  // namespace c3b
