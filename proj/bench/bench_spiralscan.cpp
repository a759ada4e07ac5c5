#include "spiralscan/baselines.hpp"
#include "spiralscan/fermat.hpp"
#include "spiralscan/isotropy.hpp"
#include "spiralscan/matching.hpp"
#include "spiralscan/parallel.hpp"
#include "spiralscan/rng.hpp"
#include "spiralscan/ssm.hpp"

#include <benchmark/benchmark.h>

using namespace spiralscan;

namespace {

FeatureMap random_map(GridDims dims, std::uint32_t ch, std::uint64_t seed) {
  FeatureMap m = make_feature_map(dims, ch);
  Rng rng(seed);
  for (double& v : m.data) v = rng.normal();
  return m;
}

PointSet random_points(std::size_t n, std::uint64_t seed) {
  PointSet ps;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    ps.points.push_back({rng.uniform(), rng.uniform()});
  return ps;
}

void BM_apply_scan(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const GridDims dims{256, 256};
  const FeatureMap m = random_map(dims, 8, 1);
  const ScanOrder so = raster_scan(dims);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_scan(m, so));
  }
  set_max_threads(0);
}
BENCHMARK(BM_apply_scan)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_nn_spacing_brute(benchmark::State& state) {
  const PointSet ps = random_points(4096, 2);
  double var = 0.0, mean = 0.0;
  for (auto _ : state) {
    nn_spacing_variance_serial(ps, var, mean);
    benchmark::DoNotOptimize(var);
  }
}
BENCHMARK(BM_nn_spacing_brute)->Unit(benchmark::kMillisecond);

void BM_nn_spacing_bucketed(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const PointSet ps = random_points(4096, 2);
  double var = 0.0, mean = 0.0;
  for (auto _ : state) {
    nn_spacing_variance(ps, var, mean);
    benchmark::DoNotOptimize(var);
  }
  set_max_threads(0);
}
BENCHMARK(BM_nn_spacing_bucketed)->Arg(1)->Arg(0)
    ->Unit(benchmark::kMillisecond);

void BM_match_exhaustive(benchmark::State& state) {
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const GridDims dims{side, side};
  const auto spiral = gen_spiral_points(SpiralParams::defaults_for(dims));
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.mode = MatchMode::exhaustive;
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_grid(spiral, dims, cfg));
  }
}
BENCHMARK(BM_match_exhaustive)->Arg(32)->Arg(96)
    ->Unit(benchmark::kMillisecond);

void BM_match_accelerated(benchmark::State& state) {
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const GridDims dims{side, side};
  const auto spiral = gen_spiral_points(SpiralParams::defaults_for(dims));
  const MatchConfig cfg = MatchConfig::defaults_for(dims);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_grid(spiral, dims, cfg));
  }
}
BENCHMARK(BM_match_accelerated)->Arg(32)->Arg(96)->Arg(256)
    ->Unit(benchmark::kMillisecond);

void BM_delaunay_lattice(benchmark::State& state) {
  const PointSet ps = points_from_cells({64, 64});
  for (auto _ : state) {
    benchmark::DoNotOptimize(delaunay_edge_variance(ps));
  }
}
BENCHMARK(BM_delaunay_lattice)->Unit(benchmark::kMillisecond);

void BM_footprint_fd(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const GridDims dims{24, 24};
  const ScanOrder so = rect_spiral_scan(dims);
  const BlockParams bp = draw_block_params(2, 4, false, dims.n_cells(), 3);
  const FeatureMap baseline = random_map(dims, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(footprint_fd_map(bp, so, baseline, 11, 11, 1e-4));
  }
  set_max_threads(0);
}
BENCHMARK(BM_footprint_fd)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_ssm_forward(benchmark::State& state) {
  const std::size_t n = 65536;
  const std::uint32_t ch = 4;
  const BlockParams bp = draw_block_params(ch, 8, true, n, 5);
  SerialSequence x{n, ch, {}};
  x.data.resize(n * ch);
  Rng rng(6);
  for (double& v : x.data) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssm_forward(x, bp.ssm_fwd));
  }
}
BENCHMARK(BM_ssm_forward)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
