#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spiralscan/baselines.hpp"
#include "spiralscan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

using namespace spiralscan;

namespace {

std::int64_t chebyshev_from_center(const GridDims& dims, std::uint32_t cell) {
  const std::int64_t cr = (static_cast<std::int64_t>(dims.height) - 1) / 2;
  const std::int64_t cc = (static_cast<std::int64_t>(dims.width) - 1) / 2;
  const std::int64_t r = dims.row_of(cell);
  const std::int64_t c = dims.col_of(cell);
  return std::max(std::llabs(r - cr), std::llabs(c - cc));
}

} // namespace

TEST_CASE("raster order is the identity permutation") {
  CHECK(raster_scan({2, 3}).order ==
        std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5});
  CHECK(raster_scan({1, 1}).order == std::vector<std::uint32_t>{0});
}

TEST_CASE("raster structural step property") {
  const GridDims dims{5, 7};
  const ScanOrder so = raster_scan(dims);
  std::size_t unit_steps = 0, wrap_steps = 0;
  for (std::size_t t = 0; t + 1 < so.order.size(); ++t) {
    const double dx = static_cast<double>(dims.col_of(so.order[t + 1])) -
                      dims.col_of(so.order[t]);
    const double dy = static_cast<double>(dims.row_of(so.order[t + 1])) -
                      dims.row_of(so.order[t]);
    const double len = std::sqrt(dx * dx + dy * dy);
    if (len == 1.0) ++unit_steps; else ++wrap_steps;
  }
  CHECK(unit_steps == dims.height * (dims.width - 1));
  CHECK(wrap_steps == dims.height - 1);
}

TEST_CASE("rect spiral on 3x3 starts at the center") {
  const ScanOrder so = rect_spiral_scan({3, 3});
  CHECK(so.order[0] == 4);
  // documented clockwise walk: entry right of center, down, around
  CHECK(so.order == std::vector<std::uint32_t>{4, 5, 8, 7, 6, 3, 0, 1, 2});
  for (std::size_t t = 1; t < so.order.size(); ++t)
    CHECK(chebyshev_from_center(so.dims, so.order[t]) == 1);
}

TEST_CASE("rect spiral 1x1") {
  CHECK(rect_spiral_scan({1, 1}).order == std::vector<std::uint32_t>{0});
}

TEST_CASE("rect spiral ring index never decreases") {
  for (const GridDims dims :
       {GridDims{64, 64}, GridDims{63, 64}, GridDims{5, 12}, GridDims{1, 9},
        GridDims{9, 1}, GridDims{2, 2}}) {
    const ScanOrder so = rect_spiral_scan(dims);
    validate_scan_order(so);
    std::int64_t last = 0;
    for (std::uint32_t cell : so.order) {
      const std::int64_t d = chebyshev_from_center(dims, cell);
      CHECK(d >= last);
      last = d;
    }
  }
}

TEST_CASE("both baselines are valid permutations on assorted dims") {
  for (const GridDims dims :
       {GridDims{1, 1}, GridDims{1, 17}, GridDims{17, 1}, GridDims{4, 4},
        GridDims{31, 7}, GridDims{16, 64}}) {
    CHECK_NOTHROW(validate_scan_order(raster_scan(dims)));
    CHECK_NOTHROW(validate_scan_order(rect_spiral_scan(dims)));
  }
}
