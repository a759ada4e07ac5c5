#include "spiralscan/ssm.hpp"

#include "spiralscan/parallel.hpp"
#include "spiralscan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace spiralscan {

namespace {

double softplus(double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double ssm_dt(const SsmParams& p, const double* xt) {
  if (!p.selective) return 1.0;
  double dot = 0.0;
  for (std::uint32_t c = 0; c < p.channels; ++c)
    dot += p.delta_proj[c] * xt[c];
  return softplus(dot);
}

void ssm_coeffs(const SsmParams& p, const double* xt, double dt, double* abar,
                double* u) {
  const std::uint32_t d_dim = p.state_dim;
  const std::uint32_t ch = p.channels;
  for (std::uint32_t d = 0; d < d_dim; ++d) {
    abar[d] = std::exp(dt * p.a_diag[d]);
    double dot = 0.0;
    for (std::uint32_t c = 0; c < ch; ++c) dot += p.b_proj[d * ch + c] * xt[c];
    u[d] = dt * dot;
  }
}

void ssm_step(const double* abar, const double* u, double* h,
              std::uint32_t d_dim) {
  for (std::uint32_t d = 0; d < d_dim; ++d) h[d] = abar[d] * h[d] + u[d];
}

void ssm_project(const SsmParams& p, const double* h, double* y) {
  const std::uint32_t d_dim = p.state_dim;
  for (std::uint32_t c = 0; c < p.channels; ++c) {
    double acc = 0.0;
    for (std::uint32_t d = 0; d < d_dim; ++d)
      acc += p.c_proj[c * d_dim + d] * h[d];
    y[c] = acc;
  }
}

// Gate pre-activation at one output position; zero padding. When
// (pert_r, pert_c) hits a tap, `delta` is added to that input before the
// multiply, which matches reading a stored perturbed map bit for bit.
double conv3x3_at(const FeatureMap& map, const BlockParams& bp,
                  std::uint32_t c_out, std::int64_t r, std::int64_t c,
                  std::int64_t pert_r = -1, std::int64_t pert_c = -1,
                  std::uint32_t pert_ch = 0, double delta = 0.0) {
  const std::int64_t h = map.dims.height;
  const std::int64_t w = map.dims.width;
  const std::size_t n = map.dims.n_cells();
  const std::uint32_t ch = bp.channels;
  double acc = bp.gate_bias[c_out];
  for (std::uint32_t ci = 0; ci < ch; ++ci) {
    for (int ki = 0; ki < 3; ++ki) {
      const std::int64_t rr = r + ki - 1;
      if (rr < 0 || rr >= h) continue;
      for (int kj = 0; kj < 3; ++kj) {
        const std::int64_t cc = c + kj - 1;
        if (cc < 0 || cc >= w) continue;
        double v = map.data[ci * n + static_cast<std::size_t>(rr) * w + cc];
        if (rr == pert_r && cc == pert_c && ci == pert_ch) v = v + delta;
        acc += bp.gate_kernel[((static_cast<std::size_t>(c_out) * ch + ci) * 3 +
                               ki) *
                                  3 +
                              kj] *
               v;
      }
    }
  }
  return acc;
}

} // namespace

void validate_ssm_params(const SsmParams& p) {
  if (p.channels < 1 || p.state_dim < 1)
    throw std::invalid_argument("ssm needs at least one channel and state");
  if (p.a_diag.size() != p.state_dim)
    throw std::invalid_argument("a_diag size mismatch");
  for (double a : p.a_diag)
    if (!(a < 0.0))
      throw std::invalid_argument("a_diag entries must be strictly negative");
  if (p.b_proj.size() !=
      static_cast<std::size_t>(p.state_dim) * p.channels)
    throw std::invalid_argument("b_proj size mismatch");
  if (p.c_proj.size() !=
      static_cast<std::size_t>(p.channels) * p.state_dim)
    throw std::invalid_argument("c_proj size mismatch");
  if (p.delta_proj.size() != p.channels)
    throw std::invalid_argument("delta_proj size mismatch");
}

SerialSequence ssm_forward(const SerialSequence& seq, const SsmParams& p) {
  validate_ssm_params(p);
  if (seq.channels != p.channels)
    throw std::invalid_argument("sequence has " +
                                std::to_string(seq.channels) +
                                " channels, ssm expects " +
                                std::to_string(p.channels));
  if (seq.data.size() != seq.length * seq.channels)
    throw std::invalid_argument("sequence data size mismatch");
  for (double v : seq.data)
    if (!std::isfinite(v))
      throw std::invalid_argument("sequence contains non-finite values");

  const std::size_t n = seq.length;
  const std::uint32_t ch = p.channels;
  const std::uint32_t d_dim = p.state_dim;

  SerialSequence out;
  out.length = n;
  out.channels = ch;
  out.data.resize(n * ch);

  std::vector<double> h(d_dim, 0.0), abar(d_dim), u(d_dim);
  for (std::size_t t = 0; t < n; ++t) {
    const double* xt = seq.data.data() + t * ch;
    const double dt = ssm_dt(p, xt);
    ssm_coeffs(p, xt, dt, abar.data(), u.data());
    ssm_step(abar.data(), u.data(), h.data(), d_dim);
    ssm_project(p, h.data(), out.data.data() + t * ch);
  }
  return out;
}

void validate_block_params(const BlockParams& bp) {
  const std::uint32_t ch = bp.channels;
  if (ch < 1) throw std::invalid_argument("block needs at least one channel");
  validate_ssm_params(bp.ssm_fwd);
  validate_ssm_params(bp.ssm_bwd);
  if (bp.ssm_fwd.channels != ch || bp.ssm_bwd.channels != ch)
    throw std::invalid_argument("ssm channel counts disagree with the block");
  if (bp.fuse_weights.size() != static_cast<std::size_t>(ch) * 2 * ch)
    throw std::invalid_argument("fuse_weights size mismatch");
  if (bp.fuse_bias.size() != ch)
    throw std::invalid_argument("fuse_bias size mismatch");
  if (bp.gate_kernel.size() != static_cast<std::size_t>(ch) * ch * 9)
    throw std::invalid_argument("gate_kernel size mismatch");
  if (bp.gate_bias.size() != ch)
    throw std::invalid_argument("gate_bias size mismatch");
}

BlockParams draw_block_params(std::uint32_t channels, std::uint32_t state_dim,
                              bool selective, std::size_t seq_len,
                              std::uint64_t seed) {
  if (channels < 1 || state_dim < 1)
    throw std::invalid_argument("block needs at least one channel and state");
  Rng rng(seed);

  const double decay_lo = std::log(1.0 / static_cast<double>(
                                             std::max<std::size_t>(seq_len, 2)));
  const double decay_hi = std::log(0.5);

  auto draw_ssm = [&](SsmParams& p) {
    p.channels = channels;
    p.state_dim = state_dim;
    p.selective = selective;
    p.a_diag.resize(state_dim);
    for (double& a : p.a_diag) a = -std::exp(rng.uniform(decay_lo, decay_hi));
    const double b_scale = 1.0 / std::sqrt(static_cast<double>(channels));
    p.b_proj.resize(static_cast<std::size_t>(state_dim) * channels);
    for (double& v : p.b_proj) v = rng.normal(b_scale);
    const double c_scale = 1.0 / std::sqrt(static_cast<double>(state_dim));
    p.c_proj.resize(static_cast<std::size_t>(channels) * state_dim);
    for (double& v : p.c_proj) v = rng.normal(c_scale);
    p.delta_proj.resize(channels);
    for (double& v : p.delta_proj) v = rng.normal(b_scale);
  };

  BlockParams bp;
  bp.channels = channels;
  draw_ssm(bp.ssm_fwd);
  draw_ssm(bp.ssm_bwd);

  const double fuse_scale = 1.0 / std::sqrt(2.0 * channels);
  bp.fuse_weights.resize(static_cast<std::size_t>(channels) * 2 * channels);
  for (double& v : bp.fuse_weights) v = rng.normal(fuse_scale);
  bp.fuse_bias.assign(channels, 0.0);

  const double gate_scale = 1.0 / std::sqrt(9.0 * channels);
  bp.gate_kernel.resize(static_cast<std::size_t>(channels) * channels * 9);
  for (double& v : bp.gate_kernel) v = rng.normal(gate_scale);
  bp.gate_bias.assign(channels, 0.0);
  return bp;
}

FeatureMap bfs_block_forward(const FeatureMap& map, const ScanOrder& order,
                             const BlockParams& bp) {
  validate_block_params(bp);
  validate_feature_map(map);
  if (!(map.dims == order.dims))
    throw std::invalid_argument("feature map and scan order dims differ");
  if (map.channels != bp.channels)
    throw std::invalid_argument("feature map channel count mismatch");

  const SerialSequence x = apply_scan(map, order);
  const SerialSequence o_fwd = ssm_forward(x, bp.ssm_fwd);
  const SerialSequence o_bwd =
      flip_sequence(ssm_forward(flip_sequence(x), bp.ssm_bwd));
  const FeatureMap g_fwd = invert_scan(o_fwd, order);
  const FeatureMap g_bwd = invert_scan(o_bwd, order);

  const std::size_t n = map.dims.n_cells();
  const std::uint32_t ch = bp.channels;
  FeatureMap out = make_feature_map(map.dims, ch);

  const int nt = threads_for(n * ch);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
    const std::size_t cell = static_cast<std::size_t>(idx);
    const std::int64_t r = static_cast<std::int64_t>(cell) / map.dims.width;
    const std::int64_t c = static_cast<std::int64_t>(cell) % map.dims.width;
    for (std::uint32_t co = 0; co < ch; ++co) {
      // fusion: forward block columns first, then backward
      double s1 = 0.0, s2 = 0.0;
      for (std::uint32_t ci = 0; ci < ch; ++ci) {
        s1 += bp.fuse_weights[co * 2 * ch + ci] * g_fwd.data[ci * n + cell];
        s2 += bp.fuse_weights[co * 2 * ch + ch + ci] *
              g_bwd.data[ci * n + cell];
      }
      const double fm = (s1 + s2) + bp.fuse_bias[co];
      const double gate = sigmoid(conv3x3_at(map, bp, co, r, c));
      out.data[co * n + cell] = map.data[co * n + cell] + (gate + fm);
    }
  }
  return out;
}

namespace {

// Per-direction baseline precomputation: discretized coefficients and the
// state prefix after every step.
struct DirPrecomp {
  std::vector<double> abar; // n x D
  std::vector<double> u;    // n x D
  std::vector<double> hpre; // n x D, state after step t
};

void precompute_dir(const SsmParams& p, const double* x, std::size_t n,
                    DirPrecomp& pc) {
  const std::uint32_t d_dim = p.state_dim;
  const std::uint32_t ch = p.channels;
  pc.abar.resize(n * d_dim);
  pc.u.resize(n * d_dim);
  pc.hpre.resize(n * d_dim);
  std::vector<double> h(d_dim, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const double* xt = x + t * ch;
    const double dt = ssm_dt(p, xt);
    ssm_coeffs(p, xt, dt, pc.abar.data() + t * d_dim, pc.u.data() + t * d_dim);
    ssm_step(pc.abar.data() + t * d_dim, pc.u.data() + t * d_dim, h.data(),
             d_dim);
    std::memcpy(pc.hpre.data() + t * d_dim, h.data(),
                d_dim * sizeof(double));
  }
}

// y at sequence position t_o when position t_p carries the perturbed channel
// vector x_tp (t_p <= t_o). Resumes from the stored baseline prefix, so the
// result is bit-identical to a full run over the perturbed sequence.
void y_at_perturbed(const SsmParams& p, const DirPrecomp& pc,
                    const double* x_tp, std::size_t t_p, std::size_t t_o,
                    double* y, double* h, double* abar, double* u) {
  const std::uint32_t d_dim = p.state_dim;
  if (t_p == 0)
    std::fill(h, h + d_dim, 0.0);
  else
    std::memcpy(h, pc.hpre.data() + (t_p - 1) * d_dim,
                d_dim * sizeof(double));
  const double dt = ssm_dt(p, x_tp);
  ssm_coeffs(p, x_tp, dt, abar, u);
  ssm_step(abar, u, h, d_dim);
  for (std::size_t t = t_p + 1; t <= t_o; ++t)
    ssm_step(pc.abar.data() + t * d_dim, pc.u.data() + t * d_dim, h, d_dim);
  ssm_project(p, h, y);
}

std::vector<std::size_t> inverse_order(const ScanOrder& order) {
  std::vector<std::size_t> pos(order.dims.n_cells());
  for (std::size_t t = 0; t < order.order.size(); ++t)
    pos[order.order[t]] = t;
  return pos;
}

void check_probe(const GridDims& dims, std::uint32_t probe_row,
                 std::uint32_t probe_col) {
  if (probe_row >= dims.height || probe_col >= dims.width)
    throw std::invalid_argument("probe position outside the grid");
}

} // namespace

std::vector<double> block_output_at(const FeatureMap& map,
                                    const ScanOrder& order,
                                    const BlockParams& bp, std::uint32_t row,
                                    std::uint32_t col) {
  validate_block_params(bp);
  validate_feature_map(map);
  if (!(map.dims == order.dims))
    throw std::invalid_argument("feature map and scan order dims differ");
  if (map.channels != bp.channels)
    throw std::invalid_argument("feature map channel count mismatch");
  check_probe(map.dims, row, col);
  validate_scan_order(order);

  const std::size_t n = map.dims.n_cells();
  const std::uint32_t ch = bp.channels;
  const SerialSequence x = apply_scan(map, order);
  const SerialSequence xb = flip_sequence(x);
  const std::vector<std::size_t> pos = inverse_order(order);
  const std::size_t t_o = pos[map.dims.cell_at(row, col)];
  const std::size_t to_b = n - 1 - t_o;

  DirPrecomp fwd, bwd;
  precompute_dir(bp.ssm_fwd, x.data.data(), n, fwd);
  precompute_dir(bp.ssm_bwd, xb.data.data(), n, bwd);

  std::vector<double> yf(ch), yb(ch);
  ssm_project(bp.ssm_fwd, fwd.hpre.data() + t_o * bp.ssm_fwd.state_dim,
              yf.data());
  ssm_project(bp.ssm_bwd, bwd.hpre.data() + to_b * bp.ssm_bwd.state_dim,
              yb.data());

  const std::size_t cell = map.dims.cell_at(row, col);
  std::vector<double> out(ch);
  for (std::uint32_t co = 0; co < ch; ++co) {
    double s1 = 0.0, s2 = 0.0;
    for (std::uint32_t ci = 0; ci < ch; ++ci) {
      s1 += bp.fuse_weights[co * 2 * ch + ci] * yf[ci];
      s2 += bp.fuse_weights[co * 2 * ch + ch + ci] * yb[ci];
    }
    const double fm = (s1 + s2) + bp.fuse_bias[co];
    const double gate = sigmoid(conv3x3_at(map, bp, co, row, col));
    out[co] = map.data[co * n + cell] + (gate + fm);
  }
  return out;
}

std::vector<double> footprint_fd_map(const BlockParams& bp,
                                     const ScanOrder& order,
                                     const FeatureMap& baseline,
                                     std::uint32_t probe_row,
                                     std::uint32_t probe_col, double fd_step) {
  validate_block_params(bp);
  validate_feature_map(baseline);
  if (!(baseline.dims == order.dims))
    throw std::invalid_argument("baseline and scan order dims differ");
  if (baseline.channels != bp.channels)
    throw std::invalid_argument("baseline channel count mismatch");
  check_probe(baseline.dims, probe_row, probe_col);
  if (!(fd_step > 0.0))
    throw std::invalid_argument("finite-difference step must be positive");
  validate_scan_order(order);

  const GridDims dims = baseline.dims;
  const std::size_t n = dims.n_cells();
  const std::uint32_t ch = bp.channels;
  const std::uint32_t dim_f = bp.ssm_fwd.state_dim;
  const std::uint32_t dim_b = bp.ssm_bwd.state_dim;

  const SerialSequence x = apply_scan(baseline, order);
  const SerialSequence xb = flip_sequence(x);
  const std::vector<std::size_t> pos = inverse_order(order);
  const std::size_t probe_cell = dims.cell_at(probe_row, probe_col);
  const std::size_t t_o = pos[probe_cell];
  const std::size_t to_b = n - 1 - t_o;

  DirPrecomp fwd, bwd;
  precompute_dir(bp.ssm_fwd, x.data.data(), n, fwd);
  precompute_dir(bp.ssm_bwd, xb.data.data(), n, bwd);

  std::vector<double> yf_base(ch), yb_base(ch), z_base(ch);
  ssm_project(bp.ssm_fwd, fwd.hpre.data() + t_o * dim_f, yf_base.data());
  ssm_project(bp.ssm_bwd, bwd.hpre.data() + to_b * dim_b, yb_base.data());
  for (std::uint32_t co = 0; co < ch; ++co)
    z_base[co] = conv3x3_at(baseline, bp, co, probe_row, probe_col);

  std::vector<double> values(n, 0.0);
  const int nt = threads_for(n * ch * 64);

#pragma omp parallel num_threads(nt) if (nt > 1)
  {
    std::vector<double> x_pert(ch), yf(ch), yb(ch), h(std::max(dim_f, dim_b)),
        abar(std::max(dim_f, dim_b)), u(std::max(dim_f, dim_b));
    std::vector<double> fo_plus(ch), fo_minus(ch);

#pragma omp for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
      const std::size_t cell = static_cast<std::size_t>(idx);
      const std::int64_t i = static_cast<std::int64_t>(cell / dims.width);
      const std::int64_t j = static_cast<std::int64_t>(cell % dims.width);
      const std::size_t t_p = pos[cell];
      const std::size_t tp_b = n - 1 - t_p;
      const bool near_probe =
          std::llabs(i - static_cast<std::int64_t>(probe_row)) <= 1 &&
          std::llabs(j - static_cast<std::int64_t>(probe_col)) <= 1;

      double g = 0.0;
      for (std::uint32_t cin = 0; cin < ch; ++cin) {
        for (int s = 0; s < 2; ++s) {
          const double delta = (s == 0 ? fd_step : -fd_step);
          std::memcpy(x_pert.data(), x.data.data() + t_p * ch,
                      ch * sizeof(double));
          x_pert[cin] = x_pert[cin] + delta;

          if (t_p <= t_o)
            y_at_perturbed(bp.ssm_fwd, fwd, x_pert.data(), t_p, t_o, yf.data(),
                           h.data(), abar.data(), u.data());
          else
            std::memcpy(yf.data(), yf_base.data(), ch * sizeof(double));

          if (tp_b <= to_b)
            y_at_perturbed(bp.ssm_bwd, bwd, x_pert.data(), tp_b, to_b,
                           yb.data(), h.data(), abar.data(), u.data());
          else
            std::memcpy(yb.data(), yb_base.data(), ch * sizeof(double));

          double* fo = (s == 0 ? fo_plus.data() : fo_minus.data());
          for (std::uint32_t co = 0; co < ch; ++co) {
            double s1 = 0.0, s2 = 0.0;
            for (std::uint32_t ci = 0; ci < ch; ++ci) {
              s1 += bp.fuse_weights[co * 2 * ch + ci] * yf[ci];
              s2 += bp.fuse_weights[co * 2 * ch + ch + ci] * yb[ci];
            }
            const double fm = (s1 + s2) + bp.fuse_bias[co];
            const double z =
                near_probe ? conv3x3_at(baseline, bp, co, probe_row, probe_col,
                                        i, j, cin, delta)
                           : z_base[co];
            double resid = baseline.data[co * n + probe_cell];
            if (cell == probe_cell && co == cin) resid = resid + delta;
            fo[co] = resid + (sigmoid(z) + fm);
          }
        }
        for (std::uint32_t co = 0; co < ch; ++co)
          g += std::fabs((fo_plus[co] - fo_minus[co]) / (2.0 * fd_step));
      }
      values[cell] = g;
    }
  }
  return values;
}

std::vector<double> footprint_analytic_map(const BlockParams& bp,
                                           const ScanOrder& order,
                                           const FeatureMap& baseline,
                                           std::uint32_t probe_row,
                                           std::uint32_t probe_col) {
  validate_block_params(bp);
  if (bp.ssm_fwd.selective || bp.ssm_bwd.selective)
    throw std::invalid_argument(
        "analytic footprint requires non-selective ssms");
  validate_feature_map(baseline);
  if (!(baseline.dims == order.dims))
    throw std::invalid_argument("baseline and scan order dims differ");
  if (baseline.channels != bp.channels)
    throw std::invalid_argument("baseline channel count mismatch");
  check_probe(baseline.dims, probe_row, probe_col);
  validate_scan_order(order);

  const GridDims dims = baseline.dims;
  const std::size_t n = dims.n_cells();
  const std::uint32_t ch = bp.channels;
  const std::uint32_t dim_f = bp.ssm_fwd.state_dim;
  const std::uint32_t dim_b = bp.ssm_bwd.state_dim;

  const std::vector<std::size_t> pos = inverse_order(order);
  const std::size_t probe_cell = dims.cell_at(probe_row, probe_col);
  const std::size_t t_o = pos[probe_cell];
  const std::size_t to_b = n - 1 - t_o;

  std::vector<double> abar_f(dim_f), abar_b(dim_b);
  for (std::uint32_t d = 0; d < dim_f; ++d)
    abar_f[d] = std::exp(bp.ssm_fwd.a_diag[d]);
  for (std::uint32_t d = 0; d < dim_b; ++d)
    abar_b[d] = std::exp(bp.ssm_bwd.a_diag[d]);

  std::vector<double> z_base(ch), sig_prime(ch);
  for (std::uint32_t co = 0; co < ch; ++co) {
    z_base[co] = conv3x3_at(baseline, bp, co, probe_row, probe_col);
    const double sg = sigmoid(z_base[co]);
    sig_prime[co] = sg * (1.0 - sg);
  }

  std::vector<double> values(n, 0.0);
  const int nt = threads_for(n * ch);

#pragma omp parallel num_threads(nt) if (nt > 1)
  {
    std::vector<double> jac(static_cast<std::size_t>(ch) * ch);
    std::vector<double> pw(std::max(dim_f, dim_b));
    std::vector<double> m_chain(static_cast<std::size_t>(ch) * ch);

#pragma omp for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
      const std::size_t cell = static_cast<std::size_t>(idx);
      const std::int64_t i = static_cast<std::int64_t>(cell / dims.width);
      const std::int64_t j = static_cast<std::int64_t>(cell % dims.width);
      const std::size_t t_p = pos[cell];
      const std::size_t tp_b = n - 1 - t_p;
      std::fill(jac.begin(), jac.end(), 0.0);

      // chain through one direction: W_block * (C diag(abar^dist) B)
      auto add_chain = [&](const SsmParams& p, const std::vector<double>& abar,
                           std::size_t dist, std::size_t w_offset) {
        const std::uint32_t d_dim = p.state_dim;
        for (std::uint32_t d = 0; d < d_dim; ++d)
          pw[d] = std::pow(abar[d], static_cast<double>(dist));
        for (std::uint32_t cm = 0; cm < ch; ++cm)
          for (std::uint32_t ci = 0; ci < ch; ++ci) {
            double acc = 0.0;
            for (std::uint32_t d = 0; d < d_dim; ++d)
              acc += p.c_proj[cm * d_dim + d] * pw[d] *
                     p.b_proj[d * ch + ci];
            m_chain[cm * ch + ci] = acc;
          }
        for (std::uint32_t co = 0; co < ch; ++co)
          for (std::uint32_t ci = 0; ci < ch; ++ci) {
            double acc = 0.0;
            for (std::uint32_t cm = 0; cm < ch; ++cm)
              acc += bp.fuse_weights[co * 2 * ch + w_offset + cm] *
                     m_chain[cm * ch + ci];
            jac[co * ch + ci] += acc;
          }
      };

      if (t_p <= t_o) add_chain(bp.ssm_fwd, abar_f, t_o - t_p, 0);
      if (tp_b <= to_b) add_chain(bp.ssm_bwd, abar_b, to_b - tp_b, ch);

      const std::int64_t di = i - static_cast<std::int64_t>(probe_row);
      const std::int64_t dj = j - static_cast<std::int64_t>(probe_col);
      if (std::llabs(di) <= 1 && std::llabs(dj) <= 1) {
        // probe reads input cell (i, j) through kernel tap (di+1, dj+1)
        const int ki = static_cast<int>(di) + 1;
        const int kj = static_cast<int>(dj) + 1;
        for (std::uint32_t co = 0; co < ch; ++co)
          for (std::uint32_t ci = 0; ci < ch; ++ci)
            jac[co * ch + ci] +=
                sig_prime[co] *
                bp.gate_kernel[((static_cast<std::size_t>(co) * ch + ci) * 3 +
                                ki) *
                                   3 +
                               kj];
      }
      if (cell == probe_cell)
        for (std::uint32_t co = 0; co < ch; ++co) jac[co * ch + co] += 1.0;

      double g = 0.0;
      for (double v : jac) g += std::fabs(v);
      values[cell] = g;
    }
  }
  return values;
}

FootprintMap footprint(const ScanOrder& order, const FootprintConfig& cfg) {
  validate_scan_order(order);
  if (cfg.n_seeds < 1)
    throw std::invalid_argument("footprint needs at least one seed");
  if (cfg.channels < 1 || cfg.state_dim < 1)
    throw std::invalid_argument("footprint needs channels and state_dim >= 1");

  const GridDims dims = order.dims;
  std::uint32_t pr, pc;
  if (cfg.probe_row < 0 || cfg.probe_col < 0) {
    pr = (dims.height - 1) / 2;
    pc = (dims.width - 1) / 2;
  } else {
    pr = static_cast<std::uint32_t>(cfg.probe_row);
    pc = static_cast<std::uint32_t>(cfg.probe_col);
  }
  check_probe(dims, pr, pc);

  const std::size_t n = dims.n_cells();
  std::vector<double> accum(n, 0.0);

  for (std::uint32_t s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed_s = Rng::mix(cfg.base_seed, s);
    const BlockParams bp =
        draw_block_params(cfg.channels, cfg.state_dim, cfg.selective, n,
                          Rng::mix(seed_s, 1));
    FeatureMap baseline = make_feature_map(dims, cfg.channels);
    Rng rng(Rng::mix(seed_s, 2));
    for (double& v : baseline.data) v = rng.normal();

    const std::vector<double> map =
        footprint_fd_map(bp, order, baseline, pr, pc, cfg.fd_step);
    for (std::size_t i = 0; i < n; ++i) accum[i] += map[i];
  }

  FootprintMap fp;
  fp.dims = dims;
  fp.probe_row = pr;
  fp.probe_col = pc;
  fp.probe = std::to_string(pr) + "," + std::to_string(pc);
  fp.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    fp.values[i] = accum[i] / static_cast<double>(cfg.n_seeds);

  const double maxv = *std::max_element(fp.values.begin(), fp.values.end());
  if (maxv == 0.0) {
    fp.zero_map = true;
  } else {
    for (double& v : fp.values) v /= maxv;
  }

  double sum = 0.0;
  for (double v : fp.values) sum += v;
  fp.mu = sum / static_cast<double>(n);
  double acc = 0.0;
  for (double v : fp.values) {
    const double d = v - fp.mu;
    acc += d * d;
  }
  fp.sigma = std::sqrt(acc / static_cast<double>(n));
  return fp;
}

} // namespace spiralscan
