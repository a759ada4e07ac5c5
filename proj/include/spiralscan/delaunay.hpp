#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace spiralscan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Orientation sign of the triangle (a, b, c): +1 counter-clockwise,
// -1 clockwise, 0 collinear or beneath the error-bound filter.
int orient2d_sign(const Point2& a, const Point2& b, const Point2& c);

// +1 when d lies strictly inside the circumcircle of the CCW triangle
// (a, b, c), -1 strictly outside, 0 co-circular or beneath the filter.
int incircle_sign(const Point2& a, const Point2& b, const Point2& c,
                  const Point2& d);

// Incremental Bowyer-Watson triangulation over a super-triangle. Points are
// inserted in index order; the in-circle predicate uses a static
// floating-point error filter, and anything inside the filter band is
// treated as co-circular and left untouched, so degenerate configurations
// keep the diagonal created earliest (index order decides).
class Delaunay {
public:
  // Throws std::invalid_argument on fewer than 3 distinct points or an
  // all-collinear input. Exact duplicate points are collapsed.
  explicit Delaunay(const std::vector<Point2>& points);

  // Vertex index triples (CCW) into the input array, super-triangle removed.
  const std::vector<std::array<std::uint32_t, 3>>& triangles() const {
    return triangles_;
  }

  // Undirected edges (a < b) between input points, each reported once.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& unique_edges()
      const {
    return edges_;
  }

private:
  std::vector<std::array<std::uint32_t, 3>> triangles_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

} // namespace spiralscan
