#pragma once

#include <cstddef>

namespace spiralscan {

// Caps the number of threads used by the OpenMP kernels in this library.
// 0 means "use the OpenMP default". Thread count never changes results:
// every parallel kernel either writes disjoint outputs or reduces through
// a total order, so serial and parallel paths are bit-identical.
void set_max_threads(int n);
int max_threads();

// Reads SPIRALSCAN_THREADS (0 or unset = auto) and applies it.
void init_threads_from_env();

// Effective thread count for a loop over `work` items. Small loops stay
// serial so the fork overhead never dominates.
int threads_for(std::size_t work);

} // namespace spiralscan
