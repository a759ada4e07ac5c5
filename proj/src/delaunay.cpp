#include "spiralscan/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace spiralscan {

namespace {

// Static filter constants after Shewchuk; eps is the machine half-ulp.
constexpr double kEps = 1.1102230246251565e-16; // 2^-53
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

int sign_with_filter(double det, double bound) {
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return 0;
}

} // namespace

int orient2d_sign(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (b.x - a.x) * (c.y - a.y);
  const double detright = (b.y - a.y) * (c.x - a.x);
  const double det = detleft - detright;
  const double detsum = std::fabs(detleft) + std::fabs(detright);
  return sign_with_filter(det, kCcwBound * detsum);
}

int incircle_sign(const Point2& a, const Point2& b, const Point2& c,
                  const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  return sign_with_filter(det, kIccBound * permanent);
}

namespace {

constexpr std::int32_t kNone = -1;

struct Tri {
  std::uint32_t v[3];
  std::int32_t nb[3]; // nb[i] faces the edge opposite v[i]
  bool alive = false;
};

struct Builder {
  const std::vector<Point2>& pts; // input plus 3 super vertices
  std::uint32_t n_real;
  std::vector<Tri> tris;
  std::vector<std::int32_t> free_list;
  std::vector<std::uint32_t> stamp;  // cavity search epochs
  std::vector<bool> bad;
  std::uint32_t epoch = 0;
  std::int32_t hint = 0;

  explicit Builder(const std::vector<Point2>& p, std::uint32_t n)
      : pts(p), n_real(n) {}

  std::int32_t alloc() {
    if (!free_list.empty()) {
      std::int32_t i = free_list.back();
      free_list.pop_back();
      tris[i].alive = true;
      return i;
    }
    tris.push_back(Tri{});
    tris.back().alive = true;
    stamp.push_back(0);
    bad.push_back(false);
    return static_cast<std::int32_t>(tris.size() - 1);
  }

  void release(std::int32_t i) {
    tris[i].alive = false;
    free_list.push_back(i);
  }

  // Walks toward p from the hint triangle. Falls back to a linear scan if
  // the walk exceeds a generous step budget.
  std::int32_t locate(const Point2& p) const {
    std::int32_t t = hint;
    if (t < 0 || !tris[t].alive) {
      t = kNone;
      for (std::size_t i = 0; i < tris.size(); ++i)
        if (tris[i].alive) { t = static_cast<std::int32_t>(i); break; }
    }
    std::size_t budget = 4 * tris.size() + 64;
    std::int32_t came_from = kNone;
    while (budget-- > 0) {
      const Tri& tr = tris[t];
      std::int32_t next = kNone;
      for (int i = 0; i < 3; ++i) {
        const std::int32_t nbi = tr.nb[i];
        if (nbi == came_from && nbi != kNone) continue;
        const Point2& e1 = pts[tr.v[(i + 1) % 3]];
        const Point2& e2 = pts[tr.v[(i + 2) % 3]];
        if (orient2d_sign(e1, e2, p) < 0) {
          next = nbi;
          break;
        }
      }
      if (next == kNone) {
        // Not strictly outside any edge we are allowed to cross.
        bool inside = true;
        for (int i = 0; i < 3; ++i) {
          const Point2& e1 = pts[tr.v[(i + 1) % 3]];
          const Point2& e2 = pts[tr.v[(i + 2) % 3]];
          if (orient2d_sign(e1, e2, p) < 0) inside = false;
        }
        if (inside) return t;
        break; // walk got stuck, scan below
      }
      came_from = t;
      t = next;
    }
    for (std::size_t i = 0; i < tris.size(); ++i) {
      if (!tris[i].alive) continue;
      const Tri& tr = tris[i];
      bool inside = true;
      for (int e = 0; e < 3 && inside; ++e)
        if (orient2d_sign(pts[tr.v[(e + 1) % 3]], pts[tr.v[(e + 2) % 3]], p) <
            0)
          inside = false;
      if (inside) return static_cast<std::int32_t>(i);
    }
    throw std::logic_error("point location failed");
  }

  bool is_duplicate(std::int32_t t, const Point2& p) const {
    for (int i = 0; i < 3; ++i) {
      const Point2& q = pts[tris[t].v[i]];
      if (q.x == p.x && q.y == p.y) return true;
    }
    return false;
  }

  struct BoundaryEdge {
    std::uint32_t a, b;
    std::int32_t outer;
    std::int32_t inner;
  };

  void insert(std::uint32_t pi) {
    const Point2& p = pts[pi];
    std::int32_t t0 = locate(p);
    if (is_duplicate(t0, p)) return;

    ++epoch;
    std::vector<std::int32_t> cavity;
    std::vector<std::int32_t> work{t0};
    stamp[t0] = epoch;
    bad[t0] = true; // the containing triangle always splits
    cavity.push_back(t0);

    while (!work.empty()) {
      const std::int32_t t = work.back();
      work.pop_back();
      for (int i = 0; i < 3; ++i) {
        const std::int32_t nbi = tris[t].nb[i];
        if (nbi == kNone || stamp[nbi] == epoch) continue;
        stamp[nbi] = epoch;
        const Tri& tr = tris[nbi];
        const bool contains =
            incircle_sign(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]], p) > 0;
        bad[nbi] = contains;
        if (contains) {
          cavity.push_back(nbi);
          work.push_back(nbi);
        }
      }
    }

    // Grow the cavity until every boundary edge sees p strictly on its left;
    // a collinear boundary edge would create a zero-area fan triangle.
    std::vector<BoundaryEdge> boundary;
    for (;;) {
      boundary.clear();
      bool grew = false;
      for (std::int32_t t : cavity) {
        const Tri& tr = tris[t];
        for (int i = 0; i < 3; ++i) {
          const std::int32_t nbi = tr.nb[i];
          if (nbi != kNone && stamp[nbi] == epoch && bad[nbi]) continue;
          const std::uint32_t a = tr.v[(i + 1) % 3];
          const std::uint32_t b = tr.v[(i + 2) % 3];
          if (orient2d_sign(pts[a], pts[b], p) <= 0) {
            if (nbi == kNone)
              throw std::logic_error("degenerate cavity at the hull");
            if (stamp[nbi] != epoch || !bad[nbi]) {
              stamp[nbi] = epoch;
              bad[nbi] = true;
              cavity.push_back(nbi);
              grew = true;
              break;
            }
          }
          boundary.push_back({a, b, nbi, t});
        }
        if (grew) break;
      }
      if (!grew) break;
    }

    // Fan the boundary polygon to p. Each new triangle is (a, b, p) with
    // edge {a,b} facing the old outer neighbor. The cavity is released only
    // afterwards so fresh triangles never alias the old indices that the
    // back-pointer fixups still search for.
    std::unordered_map<std::uint32_t, std::int32_t> by_start;
    by_start.reserve(boundary.size() * 2);
    std::vector<std::int32_t> created;
    created.reserve(boundary.size());
    for (const BoundaryEdge& e : boundary) {
      const std::int32_t t = alloc();
      Tri& tr = tris[t];
      tr.v[0] = e.a;
      tr.v[1] = e.b;
      tr.v[2] = pi;
      tr.nb[0] = kNone;
      tr.nb[1] = kNone;
      tr.nb[2] = e.outer;
      if (e.outer != kNone) {
        Tri& out = tris[e.outer];
        for (int j = 0; j < 3; ++j)
          if (out.nb[j] == e.inner) out.nb[j] = t;
      }
      if (!by_start.emplace(e.a, t).second)
        throw std::logic_error("cavity boundary is not a simple polygon");
      created.push_back(t);
    }
    for (std::int32_t t : created) {
      Tri& tr = tris[t];
      auto it = by_start.find(tr.v[1]);
      if (it == by_start.end())
        throw std::logic_error("cavity boundary is not closed");
      tr.nb[0] = it->second;      // edge {b, p}
      tris[it->second].nb[1] = t; // its edge {p, a}
    }
    for (std::int32_t t : cavity) release(t);
    hint = created.empty() ? hint : created.front();
  }
};

} // namespace

Delaunay::Delaunay(const std::vector<Point2>& points) {
  const std::size_t n = points.size();
  if (n < 3)
    throw std::invalid_argument("Delaunay needs at least 3 points");
  for (const Point2& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("Delaunay input must be finite");

  // Reject all-collinear inputs up front.
  {
    bool found = false;
    std::size_t j = 1;
    while (j < n && points[j].x == points[0].x && points[j].y == points[0].y)
      ++j;
    if (j < n) {
      for (std::size_t k = j + 1; k < n && !found; ++k)
        if (orient2d_sign(points[0], points[j], points[k]) != 0) found = true;
    }
    if (!found)
      throw std::invalid_argument("Delaunay input is collinear or degenerate");
  }

  double minx = points[0].x, maxx = points[0].x;
  double miny = points[0].y, maxy = points[0].y;
  for (const Point2& p : points) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double cx = (minx + maxx) / 2.0;
  const double cy = (miny + maxy) / 2.0;
  const double extent = std::max({maxx - minx, maxy - miny, 1e-12});
  const double m = 64.0 * extent;

  std::vector<Point2> pts = points;
  const std::uint32_t n_real = static_cast<std::uint32_t>(n);
  // Slightly lopsided placement avoids symmetric degeneracies with the data.
  pts.push_back({cx - 2.17 * m, cy - 1.03 * m});
  pts.push_back({cx + 2.29 * m, cy - 0.97 * m});
  pts.push_back({cx + 0.013 * m, cy + 2.11 * m});

  Builder builder(pts, n_real);
  {
    const std::int32_t t = builder.alloc();
    Tri& tr = builder.tris[t];
    tr.v[0] = n_real;
    tr.v[1] = n_real + 1;
    tr.v[2] = n_real + 2;
    tr.nb[0] = tr.nb[1] = tr.nb[2] = kNone;
    if (orient2d_sign(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]]) <= 0)
      std::swap(tr.v[1], tr.v[2]);
  }

  for (std::uint32_t i = 0; i < n_real; ++i) builder.insert(i);

  std::unordered_set<std::uint64_t> seen;
  for (const Tri& tr : builder.tris) {
    if (!tr.alive) continue;
    if (tr.v[0] >= n_real || tr.v[1] >= n_real || tr.v[2] >= n_real) continue;
    triangles_.push_back({tr.v[0], tr.v[1], tr.v[2]});
    for (int i = 0; i < 3; ++i) {
      std::uint32_t a = tr.v[i];
      std::uint32_t b = tr.v[(i + 1) % 3];
      if (a > b) std::swap(a, b);
      const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
      if (seen.insert(key).second) edges_.emplace_back(a, b);
    }
  }
  if (triangles_.empty())
    throw std::invalid_argument("Delaunay input is collinear or degenerate");
}

} // namespace spiralscan
