#pragma once

#include <cstddef>
#include <functional>

namespace fractalis::parallel {

// Worker cap: FRACTALIS_THREADS when set, otherwise the hardware count.
std::size_t thread_budget();

// Runs fn(i) for i in [0, count) on up to thread_budget() workers. Each
// index is processed exactly once; callers keep determinism by writing
// results into per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace fractalis::parallel
