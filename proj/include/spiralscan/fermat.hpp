#pragma once

#include "spiralscan/grid.hpp"

#include <cstdint>
#include <vector>

namespace spiralscan {

// Golden angle 2*pi*(1 - 1/phi) = pi*(3 - sqrt(5)), in radians.
double golden_angle();

struct SpiralParams {
  double alpha = 1.0;        // radial scale, grid-cell units per sqrt(index)
  double phi_g = 0.0;        // angular step in radians; 0 here is invalid,
                             // use defaults_for() or set explicitly
  std::size_t n_points = 0;
  double center_x = 0.0;     // x runs along columns, y along rows
  double center_y = 0.0;

  static SpiralParams defaults_for(const GridDims& dims);
};

void validate_spiral_params(const SpiralParams& p);

struct SpiralPoint {
  std::size_t k = 0;
  double r = 0.0;
  double theta = 0.0;  // k * phi_g, not wrapped
  double x = 0.0;
  double y = 0.0;
};

// Radial scale that puts the outermost sample radius alpha*sqrt(N-1) at half
// the grid diagonal, so the trajectory can reach the corners. 1 for a 1x1
// grid.
double default_alpha(const GridDims& dims);

// Grid-center in cell-center coordinates; half-integral for even extents.
void grid_center(const GridDims& dims, double& cx, double& cy);

// Samples r_k = alpha*sqrt(k), theta_k = k*phi_g around the center.
std::vector<SpiralPoint> gen_spiral_points(const SpiralParams& params);

} // namespace spiralscan
