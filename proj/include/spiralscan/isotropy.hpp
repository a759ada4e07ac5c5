#pragma once

#include "spiralscan/delaunay.hpp"
#include "spiralscan/fermat.hpp"
#include "spiralscan/grid.hpp"
#include "spiralscan/matching.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spiralscan {

// 2D samples; metric operations normalize them to the unit square first.
struct PointSet {
  std::vector<Point2> points;
};

PointSet points_from_cells(const GridDims& dims);
PointSet points_from_spiral(const std::vector<SpiralPoint>& spiral);

// Translates the bounding box to the origin and scales uniformly by its
// larger extent, so the set lands in [0,1]^2 with shapes preserved.
PointSet normalize_unit_square(const PointSet& ps);

struct IsotropyReport {
  std::size_t n_points = 0;
  double nn_variance = 0.0;
  double nn_mean = 0.0;
  std::optional<double> delaunay_edge_variance;
  std::optional<double> delaunay_edge_mean;
  double step_mean = 0.0;
  double step_max = 0.0;
  double step_variance = 0.0;
  bool has_steps = false;
};

// Population variance and mean of each point's distance to its nearest
// neighbor, on the unit-square normalized set. Bucket-accelerated with an
// OpenMP loop over points; nn_spacing_variance_serial is the brute-force
// reference and returns bit-identical values.
void nn_spacing_variance(const PointSet& ps, double& variance, double& mean);
void nn_spacing_variance_serial(const PointSet& ps, double& variance,
                                double& mean);

// Population variance of the unique Delaunay edge lengths of the normalized
// set. Throws on fewer than 3 points or collinear input.
double delaunay_edge_variance(const PointSet& ps);
double delaunay_edge_variance(const PointSet& ps, double& mean_out);

// Euclidean step statistics between consecutive cells of a scan order, in
// cell units. Throws on single-cell orders.
void path_step_stats(const ScanOrder& order, double& step_mean,
                     double& step_max, double& step_variance);

// Runs raster, rect_spiral and the Fermat matcher on `dims` and reports all
// metrics per strategy. The Fermat entry is split: "fermat_continuous"
// measures the raw spiral samples, "fermat_cells" the matched cell centers.
std::map<std::string, IsotropyReport> compare_strategies(
    const GridDims& dims, const MatchConfig& cfg);

// Report for one existing order: step statistics plus spacing metrics of the
// cell-center set.
IsotropyReport report_for_order(const ScanOrder& order);

} // namespace spiralscan
