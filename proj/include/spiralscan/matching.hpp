#pragma once

#include "spiralscan/fermat.hpp"
#include "spiralscan/grid.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spiralscan {

enum class MatchMode { exhaustive, accelerated };

struct MatchConfig {
  double lambda_c = 0.7;        // 0 = pure spiral proximity, 1 = pure continuity
  double eta_f = 0.0;           // normalizers; defaults_for() sets both to the
  double eta_c = 0.0;           // grid diagonal sqrt(H^2 + W^2)
  std::uint32_t candidate_count = 32;
  MatchMode mode = MatchMode::accelerated;

  static MatchConfig defaults_for(const GridDims& dims);
};

void validate_match_config(const MatchConfig& cfg);

// Assignment score of Score_u = (1-lambda_c) * d_fermat/eta_f
//                             + lambda_c * d_contin/eta_c,
// where d_fermat is the Euclidean distance from the cell center to the
// spiral sample and d_contin the distance to the previously assigned cell's
// center. Without a predecessor the continuity term is zero.
double match_score(std::uint32_t cell, const SpiralPoint& spiral,
                   std::optional<std::uint32_t> prev, const MatchConfig& cfg,
                   const GridDims& dims);

// Greedy assignment: for k = 0..N-1 pick the unassigned cell with the
// minimal score (ties resolved toward the smaller linear index). The
// exhaustive mode scans every unassigned cell and is the reference; the
// accelerated mode retrieves nearest candidates around the spiral sample and
// the previous cell and widens the candidate set until the winner is
// certified optimal, so both modes return identical orders.
ScanOrder match_grid(const std::vector<SpiralPoint>& spiral,
                     const GridDims& dims, const MatchConfig& cfg);

// Convenience: spiral defaults + matching in one call.
ScanOrder fermat_scan(const GridDims& dims, const MatchConfig& cfg);

// Dynamic set of unassigned cells with exact nearest-m retrieval.
// Rows keep their unassigned columns in sorted vectors; queries walk rows
// outward from the query point and prune on the running m-th best distance.
class UnassignedIndex {
public:
  explicit UnassignedIndex(const GridDims& dims);

  struct Hit {
    double dist2 = 0.0;
    std::uint32_t cell = 0;
  };

  // The m unassigned cells closest to (qx, qy) in Euclidean distance, ties
  // broken toward the smaller linear index, sorted ascending by
  // (dist2, cell). Returns fewer than m when fewer remain.
  void nearest(double qx, double qy, std::uint32_t m,
               std::vector<Hit>& out) const;

  void erase(std::uint32_t cell);
  std::size_t size() const { return remaining_; }

  // Smallest linear index still unassigned.
  std::uint32_t min_cell() const;

private:
  GridDims dims_;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::size_t remaining_ = 0;
};

} // namespace spiralscan
