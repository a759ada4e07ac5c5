#pragma once

#include "spiralscan/grid.hpp"

namespace spiralscan {

// Row-major identity order.
ScanOrder raster_scan(const GridDims& dims);

// Concentric square rings outward from the center cell
// (floor((H-1)/2), floor((W-1)/2)). Each ring is walked clockwise starting
// one cell to the right of the previous ring's end (the top-right corner),
// i.e. entry (cr-d+1, cc+d), down the right side, along the bottom, up the
// left side, and along the top back to the corner. Ring cells outside the
// grid are skipped.
ScanOrder rect_spiral_scan(const GridDims& dims);

} // namespace spiralscan
