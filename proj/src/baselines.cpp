#include "spiralscan/baselines.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace spiralscan {

ScanOrder raster_scan(const GridDims& dims) {
  validate_dims(dims);
  ScanOrder so;
  so.dims = dims;
  so.order.resize(dims.n_cells());
  std::iota(so.order.begin(), so.order.end(), 0u);
  return so;
}

namespace {

// Appends the run of in-grid cells along one ring side. The fixed coordinate
// is a row when `row_fixed`, the free coordinate walks from `from` to `to`
// inclusive (either direction).
void emit_side(const GridDims& dims, bool row_fixed, std::int64_t fixed,
               std::int64_t from, std::int64_t to,
               std::vector<std::uint32_t>& out) {
  const std::int64_t h = dims.height;
  const std::int64_t w = dims.width;
  if (row_fixed && (fixed < 0 || fixed >= h)) return;
  if (!row_fixed && (fixed < 0 || fixed >= w)) return;

  const std::int64_t lo_bound = 0;
  const std::int64_t hi_bound = row_fixed ? w - 1 : h - 1;
  const std::int64_t step = (to >= from) ? 1 : -1;
  std::int64_t a = from;
  std::int64_t b = to;
  if (step == 1) {
    a = std::max(a, lo_bound);
    b = std::min(b, hi_bound);
    if (a > b) return;
  } else {
    a = std::min(a, hi_bound);
    b = std::max(b, lo_bound);
    if (a < b) return;
  }
  for (std::int64_t v = a;; v += step) {
    const std::uint32_t row = static_cast<std::uint32_t>(row_fixed ? fixed : v);
    const std::uint32_t col = static_cast<std::uint32_t>(row_fixed ? v : fixed);
    out.push_back(dims.cell_at(row, col));
    if (v == b) break;
  }
}

} // namespace

ScanOrder rect_spiral_scan(const GridDims& dims) {
  validate_dims(dims);
  ScanOrder so;
  so.dims = dims;
  so.order.reserve(dims.n_cells());

  const std::int64_t cr = (static_cast<std::int64_t>(dims.height) - 1) / 2;
  const std::int64_t cc = (static_cast<std::int64_t>(dims.width) - 1) / 2;
  so.order.push_back(dims.cell_at(static_cast<std::uint32_t>(cr),
                                  static_cast<std::uint32_t>(cc)));

  const std::int64_t d_max =
      std::max(std::max(cr, static_cast<std::int64_t>(dims.height) - 1 - cr),
               std::max(cc, static_cast<std::int64_t>(dims.width) - 1 - cc));

  for (std::int64_t d = 1; d <= d_max; ++d) {
    // right side downward, entry one row below the top-right corner
    emit_side(dims, false, cc + d, cr - d + 1, cr + d, so.order);
    // bottom row, right to left
    emit_side(dims, true, cr + d, cc + d - 1, cc - d, so.order);
    // left side upward
    emit_side(dims, false, cc - d, cr + d - 1, cr - d, so.order);
    // top row, left to right, ends at the top-right corner
    emit_side(dims, true, cr - d, cc - d + 1, cc + d, so.order);
  }
  return so;
}

} // namespace spiralscan
