#include "spiralscan/fermat.hpp"

#include "spiralscan/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace spiralscan {

double golden_angle() { return M_PI * (3.0 - std::sqrt(5.0)); }

double default_alpha(const GridDims& dims) {
  validate_dims(dims);
  const std::size_t n = dims.n_cells();
  if (n == 1) return 1.0;
  const double h = static_cast<double>(dims.height);
  const double w = static_cast<double>(dims.width);
  const double half_diag = std::sqrt(h * h + w * w) / 2.0;
  return half_diag / std::sqrt(static_cast<double>(n - 1));
}

void grid_center(const GridDims& dims, double& cx, double& cy) {
  cx = (static_cast<double>(dims.width) - 1.0) / 2.0;
  cy = (static_cast<double>(dims.height) - 1.0) / 2.0;
}

SpiralParams SpiralParams::defaults_for(const GridDims& dims) {
  validate_dims(dims);
  SpiralParams p;
  p.alpha = default_alpha(dims);
  p.phi_g = golden_angle();
  p.n_points = dims.n_cells();
  grid_center(dims, p.center_x, p.center_y);
  return p;
}

void validate_spiral_params(const SpiralParams& p) {
  if (!(p.alpha > 0.0))
    throw std::invalid_argument("spiral alpha must be positive");
  if (!(p.phi_g > 0.0) || !(p.phi_g < 2.0 * M_PI))
    throw std::invalid_argument("spiral phi_g must lie in (0, 2*pi)");
  if (p.n_points < 1)
    throw std::invalid_argument("spiral needs at least one point");
  if (!std::isfinite(p.center_x) || !std::isfinite(p.center_y))
    throw std::invalid_argument("spiral center must be finite");
}

std::vector<SpiralPoint> gen_spiral_points(const SpiralParams& params) {
  validate_spiral_params(params);
  const std::size_t n = params.n_points;
  std::vector<SpiralPoint> pts(n);

  const int nt = threads_for(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    SpiralPoint& p = pts[k];
    p.k = k;
    p.r = params.alpha * std::sqrt(static_cast<double>(k));
    p.theta = static_cast<double>(k) * params.phi_g;
    p.x = params.center_x + p.r * std::cos(p.theta);
    p.y = params.center_y + p.r * std::sin(p.theta);
  }
  return pts;
}

} // namespace spiralscan
