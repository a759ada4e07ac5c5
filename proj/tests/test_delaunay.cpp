#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spiralscan/delaunay.hpp"
#include "spiralscan/rng.hpp"

#include <cmath>
#include <set>

using namespace spiralscan;
using doctest::Approx;

namespace {

double circumradius_violation(const std::vector<Point2>& pts,
                              const std::array<std::uint32_t, 3>& tri,
                              const Point2& q) {
  // positive when q is inside the circumcircle, scaled by the determinant
  const Point2 &a = pts[tri[0]], &b = pts[tri[1]], &c = pts[tri[2]];
  const double adx = a.x - q.x, ady = a.y - q.y;
  const double bdx = b.x - q.x, bdy = b.y - q.y;
  const double cdx = c.x - q.x, cdy = c.y - q.y;
  return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
         (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
         (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
}

} // namespace

TEST_CASE("triangle input yields one triangle") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.5, 0.8}};
  const Delaunay dt(pts);
  CHECK(dt.triangles().size() == 1);
  CHECK(dt.unique_edges().size() == 3);
}

TEST_CASE("collinear input is rejected") {
  const std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(Delaunay dt(pts), std::invalid_argument);
  CHECK_THROWS_AS(Delaunay dt2(std::vector<Point2>{{0, 0}, {1, 0}}),
                  std::invalid_argument);
}

TEST_CASE("unit square splits into two triangles with one diagonal") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const Delaunay dt(pts);
  CHECK(dt.triangles().size() == 2);
  CHECK(dt.unique_edges().size() == 5);
  std::size_t unit = 0, diag = 0;
  for (const auto& [a, b] : dt.unique_edges()) {
    const double dx = pts[a].x - pts[b].x;
    const double dy = pts[a].y - pts[b].y;
    const double len = std::sqrt(dx * dx + dy * dy);
    if (len == Approx(1.0)) ++unit;
    if (len == Approx(std::sqrt(2.0))) ++diag;
  }
  CHECK(unit == 4);
  CHECK(diag == 1);
}

TEST_CASE("lattice triangulation has the expected edge counts") {
  const int m = 10;
  std::vector<Point2> pts;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      pts.push_back({static_cast<double>(c), static_cast<double>(r)});
  const Delaunay dt(pts);
  CHECK(dt.triangles().size() == static_cast<std::size_t>(2 * (m - 1) * (m - 1)));
  CHECK(dt.unique_edges().size() ==
        static_cast<std::size_t>(2 * m * (m - 1) + (m - 1) * (m - 1)));
}

TEST_CASE("random point sets satisfy the empty-circumcircle property") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng rng(seed);
    std::vector<Point2> pts;
    for (int i = 0; i < 60; ++i)
      pts.push_back({rng.uniform(), rng.uniform()});
    const Delaunay dt(pts);

    // Euler sanity: E - T = n' - 1 for a triangulated point set with every
    // input distinct (true with probability 1 here).
    CHECK(dt.unique_edges().size() - dt.triangles().size() == pts.size() - 1);

    for (const auto& tri : dt.triangles()) {
      for (std::uint32_t q = 0; q < pts.size(); ++q) {
        if (q == tri[0] || q == tri[1] || q == tri[2]) continue;
        CHECK(circumradius_violation(pts, tri, pts[q]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("all triangles are counter-clockwise") {
  Rng rng(7);
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i)
    pts.push_back({rng.uniform(), rng.uniform()});
  const Delaunay dt(pts);
  for (const auto& tri : dt.triangles())
    CHECK(orient2d_sign(pts[tri[0]], pts[tri[1]], pts[tri[2]]) == 1);
}

TEST_CASE("duplicate points are collapsed") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.5, 0.8}, {0, 0}, {1, 0}};
  const Delaunay dt(pts);
  CHECK(dt.triangles().size() == 1);
}
