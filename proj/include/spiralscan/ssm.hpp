#pragma once

#include "spiralscan/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spiralscan {

// Diagonal selective state-space recurrence
//   h_t = Abar(x_t) h_{t-1} + Bbar(x_t) x_t,   y_t = C h_t
// with zero-order-hold discretization Abar = exp(dt * a_diag) elementwise
// and Euler input term Bbar = dt * b_proj. The step dt is
// softplus(delta_proj . x_t) when selective, otherwise the constant 1.
struct SsmParams {
  std::uint32_t channels = 0;
  std::uint32_t state_dim = 0;
  std::vector<double> a_diag;     // state_dim entries, all strictly negative
  std::vector<double> b_proj;     // state_dim x channels, row-major
  std::vector<double> c_proj;     // channels x state_dim, row-major
  std::vector<double> delta_proj; // channels
  bool selective = false;
};

void validate_ssm_params(const SsmParams& p);

SerialSequence ssm_forward(const SerialSequence& seq, const SsmParams& p);

// One bidirectional block: independent forward/backward SSMs over the
// serialized sequence, per-position 2C->C fusion, and a sigmoid-gated 3x3
// convolution branch with an outer residual:
//   F_out = F_in + (sigmoid(Conv3x3(F_in)) + F_m).
struct BlockParams {
  std::uint32_t channels = 0;
  SsmParams ssm_fwd;
  SsmParams ssm_bwd;
  std::vector<double> fuse_weights; // channels x 2*channels, row-major;
                                    // columns [0,C) read the forward branch
  std::vector<double> fuse_bias;    // channels
  std::vector<double> gate_kernel;  // [c_out][c_in][3][3]
  std::vector<double> gate_bias;    // channels
};

void validate_block_params(const BlockParams& bp);

// Deterministic Gaussian initialization, scale 1/sqrt(fan_in), zero biases.
// State decay rates are drawn log-uniform over [1/seq_len, 1/2] so that
// memory horizons span single cells up to the whole sequence.
BlockParams draw_block_params(std::uint32_t channels, std::uint32_t state_dim,
                              bool selective, std::size_t seq_len,
                              std::uint64_t seed);

FeatureMap bfs_block_forward(const FeatureMap& map, const ScanOrder& order,
                             const BlockParams& bp);

// Output channel vector at one grid position, bit-identical to the
// corresponding slice of bfs_block_forward. Evaluates only the recurrence
// prefix that reaches the probe.
std::vector<double> block_output_at(const FeatureMap& map,
                                    const ScanOrder& order,
                                    const BlockParams& bp, std::uint32_t row,
                                    std::uint32_t col);

// Normalized Jacobian sensitivity field of one probe output position with
// respect to every input cell, summed |d y[probe,c_out] / d x[cell,c_in]|
// over channel pairs.
struct FootprintMap {
  GridDims dims;
  std::vector<double> values; // H*W, max 1 unless zero_map
  double mu = 0.0;
  double sigma = 0.0;
  bool zero_map = false;
  std::uint32_t probe_row = 0;
  std::uint32_t probe_col = 0;
  std::string probe;
};

struct FootprintConfig {
  std::uint32_t channels = 4;
  std::uint32_t state_dim = 8;
  bool selective = false;
  std::uint32_t n_seeds = 5;
  std::uint64_t base_seed = 0;
  double fd_step = 1e-4;
  std::int64_t probe_row = -1; // -1: grid center cell
  std::int64_t probe_col = -1;
};

// Central finite differences with per-seed random parameters and baseline
// input, averaged over seeds in a fixed order, then max-normalized.
FootprintMap footprint(const ScanOrder& order, const FootprintConfig& cfg);

// Raw (unnormalized, single-parameter-set) sensitivity maps for cross-checks.
std::vector<double> footprint_fd_map(const BlockParams& bp,
                                     const ScanOrder& order,
                                     const FeatureMap& baseline,
                                     std::uint32_t probe_row,
                                     std::uint32_t probe_col, double fd_step);

// Closed-form Jacobian through the decay-power chain; non-selective SSMs
// only.
std::vector<double> footprint_analytic_map(const BlockParams& bp,
                                           const ScanOrder& order,
                                           const FeatureMap& baseline,
                                           std::uint32_t probe_row,
                                           std::uint32_t probe_col);

} // namespace spiralscan
