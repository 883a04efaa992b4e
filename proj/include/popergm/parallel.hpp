#pragma once

#include <cstddef>
#include <functional>

namespace popergm {

/// Runs body(k) for k in [0, count) on up to `workers` threads (0 = all
/// available cores). Bodies must write only to their own slots.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Number of hardware threads visible to the process.
int available_workers();

}  // namespace popergm
