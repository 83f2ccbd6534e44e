#pragma once

#include <cstddef>
#include <functional>

namespace scpsim {

// Worker count: min(hardware_concurrency, SCPSIM_THREADS), at least 1.
// Affects speed only; callers must write results into per-index slots and
// draw randomness from per-index derived streams.
int max_threads();

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace scpsim
