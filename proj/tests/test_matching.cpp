#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spiralscan/matching.hpp"
#include "spiralscan/parallel.hpp"
#include "spiralscan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace spiralscan;
using doctest::Approx;

TEST_CASE("match_score with lambda 0 is the normalized spiral distance") {
  const GridDims dims{4, 4};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = 0.0;
  SpiralPoint p{3, 1.0, 0.5, 0.25, 1.75};
  const double no_prev = match_score(5, p, std::nullopt, cfg, dims);
  const double with_prev = match_score(5, p, 9, cfg, dims);
  CHECK(no_prev == with_prev);
  const double dx = 1.0 - p.x, dy = 1.0 - p.y; // cell 5 center (1,1)
  CHECK(no_prev == Approx(std::sqrt(dx * dx + dy * dy) / cfg.eta_f)
                       .epsilon(1e-15));
}

TEST_CASE("match_score with lambda 1 and prev equal to the cell is zero") {
  const GridDims dims{4, 4};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = 1.0;
  SpiralPoint p{2, 5.0, 1.0, 100.0, -40.0};
  CHECK(match_score(7, p, 7, cfg, dims) == 0.0);
}

TEST_CASE("match_score at k=0 on the exact spiral point is zero") {
  const GridDims dims{3, 3};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = 0.7;
  SpiralPoint p0{0, 0.0, 0.0, 1.0, 1.0}; // center cell (1,1) = index 4
  CHECK(match_score(4, p0, std::nullopt, cfg, dims) == 0.0);
}

TEST_CASE("match_score rejects out-of-range cells") {
  const GridDims dims{2, 2};
  const MatchConfig cfg = MatchConfig::defaults_for(dims);
  SpiralPoint p{0, 0, 0, 0, 0};
  CHECK_THROWS_AS(match_score(4, p, std::nullopt, cfg, dims),
                  std::invalid_argument);
}

TEST_CASE("matching a 1x1 grid") {
  const GridDims dims{1, 1};
  const MatchConfig cfg = MatchConfig::defaults_for(dims);
  CHECK(fermat_scan(dims, cfg).order == std::vector<std::uint32_t>{0});
}

TEST_CASE("2x2 with lambda 0 resolves the four-way tie to cell 0") {
  const GridDims dims{2, 2};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = 0.0;
  const ScanOrder so = fermat_scan(dims, cfg);
  CHECK(so.order[0] == 0);
  CHECK_NOTHROW(validate_scan_order(so));
}

TEST_CASE("spiral length mismatch is rejected") {
  const GridDims dims{3, 3};
  const MatchConfig cfg = MatchConfig::defaults_for(dims);
  SpiralParams p = SpiralParams::defaults_for(dims);
  p.n_points = 5;
  CHECK_THROWS_AS(match_grid(gen_spiral_points(p), dims, cfg),
                  std::invalid_argument);
}

TEST_CASE("accelerated equals exhaustive on small grids") {
  for (const GridDims dims :
       {GridDims{1, 5}, GridDims{2, 3}, GridDims{3, 3}, GridDims{4, 4},
        GridDims{5, 4}, GridDims{8, 8}, GridDims{7, 3}}) {
    const auto spiral = gen_spiral_points(SpiralParams::defaults_for(dims));
    for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
      MatchConfig cfg = MatchConfig::defaults_for(dims);
      cfg.lambda_c = lambda;
      cfg.candidate_count = 4; // stress the widening loop
      cfg.mode = MatchMode::exhaustive;
      const ScanOrder ex = match_grid(spiral, dims, cfg);
      cfg.mode = MatchMode::accelerated;
      const ScanOrder ac = match_grid(spiral, dims, cfg);
      REQUIRE(ex.order == ac.order);
      CHECK_NOTHROW(validate_scan_order(ac));
    }
  }
}

TEST_CASE("matching is deterministic across thread counts and runs") {
  const GridDims dims{16, 16};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  const auto spiral = gen_spiral_points(SpiralParams::defaults_for(dims));

  set_max_threads(1);
  const ScanOrder a1 = match_grid(spiral, dims, cfg);
  set_max_threads(4);
  const ScanOrder a4 = match_grid(spiral, dims, cfg);
  CHECK(a1.order == a4.order);

  cfg.mode = MatchMode::exhaustive;
  set_max_threads(1);
  const ScanOrder e1 = match_grid(spiral, dims, cfg);
  set_max_threads(4);
  const ScanOrder e4 = match_grid(spiral, dims, cfg);
  set_max_threads(0);
  CHECK(e1.order == e4.order);
  CHECK(e1.order == a1.order);
}

TEST_CASE("mean step length shrinks when continuity dominates") {
  const GridDims dims{16, 16};
  const auto spiral = gen_spiral_points(SpiralParams::defaults_for(dims));
  auto mean_step = [&](double lambda) {
    MatchConfig cfg = MatchConfig::defaults_for(dims);
    cfg.lambda_c = lambda;
    const ScanOrder so = match_grid(spiral, dims, cfg);
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < so.order.size(); ++t) {
      const double dx = static_cast<double>(dims.col_of(so.order[t + 1])) -
                        dims.col_of(so.order[t]);
      const double dy = static_cast<double>(dims.row_of(so.order[t + 1])) -
                        dims.row_of(so.order[t]);
      sum += std::sqrt(dx * dx + dy * dy);
    }
    return sum / static_cast<double>(so.order.size() - 1);
  };
  CHECK(mean_step(1.0) <= mean_step(0.0));
}

namespace {

struct BruteSet {
  GridDims dims;
  std::set<std::uint32_t> cells;

  std::vector<UnassignedIndex::Hit> nearest(double qx, double qy,
                                            std::uint32_t m) const {
    std::vector<UnassignedIndex::Hit> all;
    for (std::uint32_t cell : cells) {
      const double dx = static_cast<double>(dims.col_of(cell)) - qx;
      const double dy = static_cast<double>(dims.row_of(cell)) - qy;
      all.push_back({dx * dx + dy * dy, cell});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.cell < b.cell);
    });
    if (all.size() > m) all.resize(m);
    return all;
  }
};

} // namespace

TEST_CASE("UnassignedIndex nearest-m matches brute force with deletions") {
  const GridDims dims{9, 7};
  UnassignedIndex index(dims);
  BruteSet brute{dims, {}};
  for (std::uint32_t i = 0; i < dims.n_cells(); ++i) brute.cells.insert(i);

  Rng rng(99);
  for (int round = 0; round < 200; ++round) {
    const double qx = rng.uniform(-3.0, 9.0);
    const double qy = rng.uniform(-3.0, 11.0);
    for (std::uint32_t m : {1u, 3u, 8u, 64u}) {
      std::vector<UnassignedIndex::Hit> got;
      index.nearest(qx, qy, m, got);
      const auto want = brute.nearest(qx, qy, m);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].cell == want[i].cell);
        CHECK(got[i].dist2 == want[i].dist2);
      }
    }
    if (!brute.cells.empty() && round % 2 == 0) {
      auto it = brute.cells.begin();
      std::advance(it, rng.next_u64() % brute.cells.size());
      index.erase(*it);
      brute.cells.erase(it);
    }
  }
  CHECK(index.size() == brute.cells.size());
}

TEST_CASE("UnassignedIndex tie-breaks by linear index") {
  const GridDims dims{3, 3};
  UnassignedIndex index(dims);
  // query at the exact center: all 4 edge-adjacent cells tie at distance 1
  std::vector<UnassignedIndex::Hit> hits;
  index.nearest(1.0, 1.0, 3, hits);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].cell == 4); // distance 0
  CHECK(hits[1].cell == 1);
  CHECK(hits[2].cell == 3);
}

TEST_CASE("config validation") {
  const GridDims dims{4, 4};
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = 1.5;
  CHECK_THROWS_AS(validate_match_config(cfg), std::invalid_argument);
  cfg = MatchConfig::defaults_for(dims);
  cfg.eta_f = 0.0;
  CHECK_THROWS_AS(validate_match_config(cfg), std::invalid_argument);
  cfg = MatchConfig::defaults_for(dims);
  cfg.candidate_count = 0;
  CHECK_THROWS_AS(validate_match_config(cfg), std::invalid_argument);
}
