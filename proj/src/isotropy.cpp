#include "spiralscan/isotropy.hpp"

#include "spiralscan/baselines.hpp"
#include "spiralscan/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spiralscan {

PointSet points_from_cells(const GridDims& dims) {
  validate_dims(dims);
  PointSet ps;
  ps.points.reserve(dims.n_cells());
  for (std::uint32_t r = 0; r < dims.height; ++r)
    for (std::uint32_t c = 0; c < dims.width; ++c)
      ps.points.push_back(
          {static_cast<double>(c), static_cast<double>(r)});
  return ps;
}

PointSet points_from_spiral(const std::vector<SpiralPoint>& spiral) {
  PointSet ps;
  ps.points.reserve(spiral.size());
  for (const SpiralPoint& p : spiral) ps.points.push_back({p.x, p.y});
  return ps;
}

PointSet normalize_unit_square(const PointSet& ps) {
  if (ps.points.empty()) return ps;
  double minx = ps.points[0].x, maxx = minx;
  double miny = ps.points[0].y, maxy = miny;
  for (const Point2& p : ps.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("point set must be finite");
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  // Uniform scale by the larger extent keeps shapes intact; the longer axis
  // spans [0,1], the other lands inside it.
  const double extent = std::max(maxx - minx, maxy - miny);
  const double s = extent > 0.0 ? 1.0 / extent : 0.0;
  PointSet out;
  out.points.resize(ps.points.size());
  for (std::size_t i = 0; i < ps.points.size(); ++i)
    out.points[i] = {(ps.points[i].x - minx) * s, (ps.points[i].y - miny) * s};
  return out;
}

namespace {

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

void variance_of(const std::vector<double>& xs, double& variance,
                 double& mean) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    acc += d * d;
  }
  variance = acc / static_cast<double>(xs.size());
}

// Nearest-neighbor distances via uniform bucketing of the unit square.
// Expanding bucket rings around each query; exact because a ring is only
// skipped once its minimum possible distance exceeds the current best.
std::vector<double> nn_distances_bucketed(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  const int grid = std::max(1, static_cast<int>(std::sqrt(
                                   static_cast<double>(n))));
  const double cell = 1.0 / grid;
  std::vector<std::vector<std::uint32_t>> buckets(
      static_cast<std::size_t>(grid) * grid);
  auto bucket_of = [&](const Point2& p) {
    int bx = std::min(grid - 1, std::max(0, static_cast<int>(p.x / cell)));
    int by = std::min(grid - 1, std::max(0, static_cast<int>(p.y / cell)));
    return std::make_pair(bx, by);
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    auto [bx, by] = bucket_of(pts[i]);
    buckets[static_cast<std::size_t>(by) * grid + bx].push_back(i);
  }

  std::vector<double> out(n);
  const int nt = threads_for(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const std::uint32_t i = static_cast<std::uint32_t>(ii);
    const auto [bx, by] = bucket_of(pts[i]);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < grid; ++ring) {
      if (ring > 0) {
        const double ring_min = (ring - 1) * cell;
        if (best < ring_min * ring_min) break;
      }
      for (int dy = -ring; dy <= ring; ++dy) {
        const int y = by + dy;
        if (y < 0 || y >= grid) continue;
        const bool edge_row = (dy == -ring || dy == ring);
        const int step = edge_row ? 1 : 2 * ring;
        for (int dx = -ring; dx <= ring; dx += step) {
          const int x = bx + dx;
          if (x < 0 || x >= grid) continue;
          for (std::uint32_t j :
               buckets[static_cast<std::size_t>(y) * grid + x]) {
            if (j == i) continue;
            best = std::min(best, dist2(pts[i], pts[j]));
          }
        }
      }
    }
    out[i] = std::sqrt(best);
  }
  return out;
}

std::vector<double> nn_distances_brute(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, dist2(pts[i], pts[j]));
    }
    out[i] = std::sqrt(best);
  }
  return out;
}

void check_nn_pre(const PointSet& ps) {
  if (ps.points.size() < 2)
    throw std::invalid_argument(
        "nearest-neighbor spacing needs at least 2 points");
}

} // namespace

void nn_spacing_variance(const PointSet& ps, double& variance, double& mean) {
  check_nn_pre(ps);
  const PointSet norm = normalize_unit_square(ps);
  variance_of(nn_distances_bucketed(norm.points), variance, mean);
}

void nn_spacing_variance_serial(const PointSet& ps, double& variance,
                                double& mean) {
  check_nn_pre(ps);
  const PointSet norm = normalize_unit_square(ps);
  variance_of(nn_distances_brute(norm.points), variance, mean);
}

double delaunay_edge_variance(const PointSet& ps, double& mean_out) {
  if (ps.points.size() < 3)
    throw std::invalid_argument("Delaunay analysis needs at least 3 points");
  const PointSet norm = normalize_unit_square(ps);
  const Delaunay dt(norm.points);
  const auto& edges = dt.unique_edges();
  std::vector<double> lengths;
  lengths.reserve(edges.size());
  for (const auto& [a, b] : edges)
    lengths.push_back(std::sqrt(dist2(norm.points[a], norm.points[b])));
  double variance = 0.0;
  variance_of(lengths, variance, mean_out);
  return variance;
}

double delaunay_edge_variance(const PointSet& ps) {
  double mean = 0.0;
  return delaunay_edge_variance(ps, mean);
}

void path_step_stats(const ScanOrder& order, double& step_mean,
                     double& step_max, double& step_variance) {
  validate_scan_order(order);
  const std::size_t n = order.dims.n_cells();
  if (n < 2)
    throw std::invalid_argument("step statistics need at least 2 cells");
  std::vector<double> steps(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const double ax = order.dims.col_of(order.order[t]);
    const double ay = order.dims.row_of(order.order[t]);
    const double bx = order.dims.col_of(order.order[t + 1]);
    const double by = order.dims.row_of(order.order[t + 1]);
    const double dx = bx - ax;
    const double dy = by - ay;
    steps[t] = std::sqrt(dx * dx + dy * dy);
  }
  step_max = *std::max_element(steps.begin(), steps.end());
  variance_of(steps, step_variance, step_mean);
}

namespace {

IsotropyReport spacing_report(const PointSet& ps) {
  IsotropyReport rep;
  rep.n_points = ps.points.size();
  if (ps.points.size() >= 2)
    nn_spacing_variance(ps, rep.nn_variance, rep.nn_mean);
  if (ps.points.size() >= 3) {
    try {
      double mean = 0.0;
      const double var = delaunay_edge_variance(ps, mean);
      rep.delaunay_edge_variance = var;
      rep.delaunay_edge_mean = mean;
    } catch (const std::invalid_argument&) {
      // collinear input: flagged unavailable
    }
  }
  return rep;
}

void add_steps(IsotropyReport& rep, const ScanOrder& order) {
  if (order.dims.n_cells() >= 2) {
    path_step_stats(order, rep.step_mean, rep.step_max, rep.step_variance);
    rep.has_steps = true;
  }
}

} // namespace

IsotropyReport report_for_order(const ScanOrder& order) {
  IsotropyReport rep = spacing_report(points_from_cells(order.dims));
  add_steps(rep, order);
  return rep;
}

std::map<std::string, IsotropyReport> compare_strategies(
    const GridDims& dims, const MatchConfig& cfg) {
  validate_dims(dims);
  validate_match_config(cfg);

  std::map<std::string, IsotropyReport> out;

  // All three strategies share the lattice of cell centers; measure it once.
  const IsotropyReport lattice = spacing_report(points_from_cells(dims));

  {
    IsotropyReport rep = lattice;
    add_steps(rep, raster_scan(dims));
    out.emplace("raster", rep);
  }
  {
    IsotropyReport rep = lattice;
    add_steps(rep, rect_spiral_scan(dims));
    out.emplace("rect_spiral", rep);
  }
  {
    const SpiralParams params = SpiralParams::defaults_for(dims);
    const std::vector<SpiralPoint> spiral = gen_spiral_points(params);
    out.emplace("fermat_continuous", spacing_report(points_from_spiral(spiral)));

    IsotropyReport rep = lattice;
    add_steps(rep, match_grid(spiral, dims, cfg));
    out.emplace("fermat_cells", rep);
  }
  return out;
}

} // namespace spiralscan
