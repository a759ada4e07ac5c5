#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spiralscan/grid.hpp"
#include "spiralscan/parallel.hpp"
#include "spiralscan/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace spiralscan;

namespace {

ScanOrder make_order(GridDims dims, std::vector<std::uint32_t> order) {
  return ScanOrder{dims, std::move(order)};
}

FeatureMap random_map(GridDims dims, std::uint32_t channels,
                      std::uint64_t seed) {
  FeatureMap m = make_feature_map(dims, channels);
  Rng rng(seed);
  for (double& v : m.data) v = rng.normal();
  return m;
}

ScanOrder random_order(GridDims dims, std::uint64_t seed) {
  ScanOrder so;
  so.dims = dims;
  so.order.resize(dims.n_cells());
  std::iota(so.order.begin(), so.order.end(), 0u);
  Rng rng(seed);
  for (std::size_t i = so.order.size(); i > 1; --i)
    std::swap(so.order[i - 1], so.order[rng.next_u64() % i]);
  return so;
}

} // namespace

TEST_CASE("apply_scan raster order is the identity") {
  FeatureMap m = make_feature_map({2, 2}, 1);
  m.data = {1, 2, 3, 4};
  const SerialSequence s = apply_scan(m, make_order({2, 2}, {0, 1, 2, 3}));
  CHECK(s.data == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("apply_scan reversal order reverses") {
  FeatureMap m = make_feature_map({2, 2}, 1);
  m.data = {1, 2, 3, 4};
  const SerialSequence s = apply_scan(m, make_order({2, 2}, {3, 2, 1, 0}));
  CHECK(s.data == std::vector<double>{4, 3, 2, 1});
}

TEST_CASE("invert_scan places positions back on the grid") {
  SerialSequence s{4, 1, {1, 2, 3, 4}};
  const FeatureMap m = invert_scan(s, make_order({2, 2}, {0, 1, 2, 3}));
  CHECK(m.data == std::vector<double>{1, 2, 3, 4});

  SerialSequence rev{4, 1, {4, 3, 2, 1}};
  const FeatureMap m2 = invert_scan(rev, make_order({2, 2}, {3, 2, 1, 0}));
  CHECK(m2.data == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("apply/invert are exact mutual inverses") {
  const GridDims dims{8, 8};
  const FeatureMap m = random_map(dims, 3, 11);
  const ScanOrder so = random_order(dims, 12);
  const FeatureMap back = invert_scan(apply_scan(m, so), so);
  CHECK(back.data == m.data);

  const GridDims d16{16, 16};
  const ScanOrder so16 = random_order(d16, 13);
  SerialSequence s{d16.n_cells(), 2, {}};
  Rng rng(14);
  s.data.resize(s.length * s.channels);
  for (double& v : s.data) v = rng.normal();
  const SerialSequence round = apply_scan(invert_scan(s, so16), so16);
  CHECK(round.data == s.data);
}

TEST_CASE("flip_sequence reverses positions and is an involution") {
  SerialSequence s{3, 1, {1, 2, 3}};
  const SerialSequence f = flip_sequence(s);
  CHECK(f.data == std::vector<double>{3, 2, 1});
  CHECK(flip_sequence(f).data == s.data);

  SerialSequence one{1, 2, {5, 6}};
  CHECK(flip_sequence(one).data == one.data);
}

TEST_CASE("scan order validation rejects bad permutations") {
  CHECK_THROWS_AS(validate_scan_order(make_order({2, 2}, {0, 1, 2, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_scan_order(make_order({2, 2}, {0, 1, 2, 4})),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_scan_order(make_order({2, 2}, {0, 1, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_dims(GridDims{0, 3}), std::invalid_argument);
}

TEST_CASE("apply_scan rejects mismatched dims and invalid orders") {
  const FeatureMap m = random_map({4, 4}, 2, 3);
  CHECK_THROWS_AS(apply_scan(m, random_order({4, 5}, 4)),
                  std::invalid_argument);
  ScanOrder bad = random_order({4, 4}, 5);
  bad.order[0] = bad.order[1];
  CHECK_THROWS_AS(apply_scan(m, bad), std::invalid_argument);

  SerialSequence s{5, 1, {1, 2, 3, 4, 5}};
  CHECK_THROWS_AS(invert_scan(s, random_order({4, 4}, 6)),
                  std::invalid_argument);
}

TEST_CASE("serialization kernels are thread-count invariant") {
  const GridDims dims{96, 80};
  const FeatureMap m = random_map(dims, 4, 21);
  const ScanOrder so = random_order(dims, 22);

  set_max_threads(1);
  const SerialSequence s1 = apply_scan(m, so);
  const FeatureMap b1 = invert_scan(s1, so);
  set_max_threads(4);
  const SerialSequence s4 = apply_scan(m, so);
  const FeatureMap b4 = invert_scan(s4, so);
  set_max_threads(0);

  CHECK(s1.data == s4.data);
  CHECK(b1.data == b4.data);
  CHECK(b1.data == m.data);
}
