#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spiralscan/fermat.hpp"

#include <cmath>

using namespace spiralscan;
using doctest::Approx;

TEST_CASE("default_alpha matches the half-diagonal rule") {
  // alpha = (sqrt(H^2+W^2)/2) / sqrt(N-1)
  const double a256 = default_alpha({256, 256});
  CHECK(a256 == Approx(std::sqrt(2.0 * 256 * 256) / 2.0 / std::sqrt(65535.0))
                    .epsilon(1e-15));
  CHECK(a256 == Approx(0.70712).epsilon(1e-4));

  CHECK(default_alpha({1, 1}) == 1.0);
  CHECK(default_alpha({2, 2}) == Approx(0.81650).epsilon(1e-4));
}

TEST_CASE("golden angle default") {
  const double deg = golden_angle() * 180.0 / M_PI;
  CHECK(deg == Approx(137.5078).epsilon(1e-5));
  const SpiralParams p = SpiralParams::defaults_for({16, 16});
  CHECK(p.phi_g == golden_angle());
}

TEST_CASE("spiral sample k=0 sits at the center") {
  SpiralParams p;
  p.alpha = 2.5;
  p.phi_g = golden_angle();
  p.n_points = 4;
  p.center_x = 3.25;
  p.center_y = -1.5;
  const auto pts = gen_spiral_points(p);
  CHECK(pts[0].r == 0.0);
  CHECK(pts[0].x == p.center_x);
  CHECK(pts[0].y == p.center_y);
}

TEST_CASE("spiral sample k=1 with unit alpha") {
  SpiralParams p;
  p.alpha = 1.0;
  p.phi_g = golden_angle();
  p.n_points = 2;
  p.center_x = 0.0;
  p.center_y = 0.0;
  const auto pts = gen_spiral_points(p);
  CHECK(pts[1].r == Approx(1.0).epsilon(1e-15));
  CHECK(pts[1].theta == Approx(2.399963).epsilon(1e-6));
  CHECK(pts[1].x == Approx(-0.73736).epsilon(1e-4));
  CHECK(pts[1].y == Approx(0.67549).epsilon(1e-4));
}

TEST_CASE("radii increase and angular increments are constant") {
  const SpiralParams p = SpiralParams::defaults_for({32, 32});
  const auto pts = gen_spiral_points(p);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK(pts[k].r > pts[k - 1].r);
    CHECK(std::fabs((pts[k].theta - pts[k - 1].theta) - p.phi_g) < 1e-9);
  }
}

TEST_CASE("outermost default-alpha radius reaches half the grid diagonal") {
  for (const GridDims dims : {GridDims{32, 32}, GridDims{17, 61}}) {
    const SpiralParams p = SpiralParams::defaults_for(dims);
    const auto pts = gen_spiral_points(p);
    double max_r = 0.0;
    for (const SpiralPoint& pt : pts) {
      const double dx = pt.x - p.center_x;
      const double dy = pt.y - p.center_y;
      max_r = std::max(max_r, std::sqrt(dx * dx + dy * dy));
    }
    const double half_diag =
        std::sqrt(static_cast<double>(dims.height) * dims.height +
                  static_cast<double>(dims.width) * dims.width) /
        2.0;
    CHECK(max_r == Approx(half_diag).epsilon(1e-9));
  }
}

TEST_CASE("spiral parameter validation") {
  SpiralParams p = SpiralParams::defaults_for({4, 4});
  p.alpha = 0.0;
  CHECK_THROWS_AS(gen_spiral_points(p), std::invalid_argument);
  p = SpiralParams::defaults_for({4, 4});
  p.phi_g = 7.0;
  CHECK_THROWS_AS(gen_spiral_points(p), std::invalid_argument);
  p = SpiralParams::defaults_for({4, 4});
  p.n_points = 0;
  CHECK_THROWS_AS(gen_spiral_points(p), std::invalid_argument);
}
