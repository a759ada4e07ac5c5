#include "spiralscan/matching.hpp"

#include "spiralscan/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spiralscan {

MatchConfig MatchConfig::defaults_for(const GridDims& dims) {
  validate_dims(dims);
  MatchConfig cfg;
  const double h = static_cast<double>(dims.height);
  const double w = static_cast<double>(dims.width);
  cfg.eta_f = cfg.eta_c = std::sqrt(h * h + w * w);
  return cfg;
}

void validate_match_config(const MatchConfig& cfg) {
  if (!(cfg.lambda_c >= 0.0) || !(cfg.lambda_c <= 1.0))
    throw std::invalid_argument("lambda_c must lie in [0, 1]");
  if (!(cfg.eta_f > 0.0)) throw std::invalid_argument("eta_f must be positive");
  if (!(cfg.eta_c > 0.0)) throw std::invalid_argument("eta_c must be positive");
  if (cfg.candidate_count < 1)
    throw std::invalid_argument("candidate_count must be at least 1");
}

double match_score(std::uint32_t cell, const SpiralPoint& spiral,
                   std::optional<std::uint32_t> prev, const MatchConfig& cfg,
                   const GridDims& dims) {
  const std::size_t n = dims.n_cells();
  if (cell >= n)
    throw std::invalid_argument("cell index " + std::to_string(cell) +
                                " out of range");
  const double cx = static_cast<double>(dims.col_of(cell));
  const double cy = static_cast<double>(dims.row_of(cell));

  const double fx = cx - spiral.x;
  const double fy = cy - spiral.y;
  const double d_f = std::sqrt(fx * fx + fy * fy);
  const double coef_f = (1.0 - cfg.lambda_c) / cfg.eta_f;
  double score = coef_f * d_f;

  if (prev.has_value()) {
    const double px = static_cast<double>(dims.col_of(*prev));
    const double py = static_cast<double>(dims.row_of(*prev));
    const double dx = cx - px;
    const double dy = cy - py;
    const double d_c = std::sqrt(dx * dx + dy * dy);
    const double coef_c = cfg.lambda_c / cfg.eta_c;
    score += coef_c * d_c;
  }
  return score;
}

UnassignedIndex::UnassignedIndex(const GridDims& dims) : dims_(dims) {
  validate_dims(dims);
  row_cols_.resize(dims.height);
  for (std::uint32_t r = 0; r < dims.height; ++r) {
    row_cols_[r].resize(dims.width);
    for (std::uint32_t c = 0; c < dims.width; ++c) row_cols_[r][c] = c;
  }
  remaining_ = dims.n_cells();
}

void UnassignedIndex::erase(std::uint32_t cell) {
  const std::uint32_t r = dims_.row_of(cell);
  const std::uint32_t c = dims_.col_of(cell);
  auto& cols = row_cols_[r];
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c)
    throw std::invalid_argument("cell " + std::to_string(cell) +
                                " is not in the unassigned set");
  cols.erase(it);
  --remaining_;
}

namespace {

inline bool hit_less(const UnassignedIndex::Hit& a,
                     const UnassignedIndex::Hit& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.cell < b.cell);
}

} // namespace

void UnassignedIndex::nearest(double qx, double qy, std::uint32_t m,
                              std::vector<Hit>& out) const {
  out.clear();
  if (m == 0 || remaining_ == 0) return;

  const std::int64_t h = dims_.height;
  // Max-heap keeping the m best (dist2, cell); front is the current worst.
  auto cmp = hit_less;

  auto consider = [&](double dist2, std::uint32_t cell) -> bool {
    // Returns true when the candidate was kept.
    Hit cand{dist2, cell};
    if (out.size() < m) {
      out.push_back(cand);
      std::push_heap(out.begin(), out.end(), cmp);
      return true;
    }
    if (hit_less(cand, out.front())) {
      std::pop_heap(out.begin(), out.end(), cmp);
      out.back() = cand;
      std::push_heap(out.begin(), out.end(), cmp);
      return true;
    }
    return false;
  };

  auto scan_row = [&](std::int64_t r) {
    const auto& cols = row_cols_[static_cast<std::size_t>(r)];
    if (cols.empty()) return;
    const double dy = static_cast<double>(r) - qy;
    const double dy2 = dy * dy;
    const std::uint32_t base =
        dims_.cell_at(static_cast<std::uint32_t>(r), 0);

    auto split = std::lower_bound(
        cols.begin(), cols.end(), qx,
        [](std::uint32_t c, double q) { return static_cast<double>(c) < q; });
    std::ptrdiff_t ir = split - cols.begin();
    std::ptrdiff_t il = ir - 1;
    bool left_ok = il >= 0;
    bool right_ok = ir < static_cast<std::ptrdiff_t>(cols.size());

    while (left_ok || right_ok) {
      double dxl2 = 0.0, dxr2 = 0.0;
      if (left_ok) {
        const double d = static_cast<double>(cols[il]) - qx;
        dxl2 = d * d;
      }
      if (right_ok) {
        const double d = static_cast<double>(cols[ir]) - qx;
        dxr2 = d * d;
      }
      const bool take_left = left_ok && (!right_ok || dxl2 <= dxr2);
      const double dx2 = take_left ? dxl2 : dxr2;
      const std::uint32_t col = take_left ? cols[il] : cols[ir];
      const double dist2 = dy2 + dx2;

      consider(dist2, base + col);
      if (out.size() == m && dist2 > out.front().dist2) {
        // Columns further out on this side can only be worse.
        if (take_left) left_ok = false; else right_ok = false;
      }
      if (take_left) {
        if (--il < 0) left_ok = false;
      } else {
        if (++ir >= static_cast<std::ptrdiff_t>(cols.size())) right_ok = false;
      }
    }
  };

  // Rows outward from qy; a whole direction is pruned once its row-distance
  // alone exceeds the current worst kept distance.
  std::int64_t rlo = static_cast<std::int64_t>(std::floor(qy));
  std::int64_t rhi = rlo + 1;
  rlo = std::min(rlo, h - 1);
  rhi = std::max(rhi, std::int64_t{0});
  bool lo_ok = rlo >= 0;
  bool hi_ok = rhi < h;

  auto row_pruned = [&](std::int64_t r) {
    if (out.size() < m) return false;
    const double dy = static_cast<double>(r) - qy;
    return dy * dy > out.front().dist2;
  };

  while (lo_ok || hi_ok) {
    std::int64_t r;
    if (lo_ok && hi_ok) {
      const double dlo = qy - static_cast<double>(rlo);
      const double dhi = static_cast<double>(rhi) - qy;
      r = (dlo <= dhi) ? rlo : rhi;
    } else {
      r = lo_ok ? rlo : rhi;
    }
    if (row_pruned(r)) {
      if (r == rlo) lo_ok = false; else hi_ok = false;
      continue;
    }
    scan_row(r);
    if (r == rlo) {
      if (--rlo < 0) lo_ok = false;
    } else {
      if (++rhi >= h) hi_ok = false;
    }
  }

  std::sort(out.begin(), out.end(), cmp);
}

std::uint32_t UnassignedIndex::min_cell() const {
  for (std::uint32_t r = 0; r < row_cols_.size(); ++r)
    if (!row_cols_[r].empty()) return dims_.cell_at(r, row_cols_[r][0]);
  throw std::logic_error("unassigned set is empty");
}

namespace {

struct Best {
  double score = std::numeric_limits<double>::infinity();
  std::uint32_t cell = std::numeric_limits<std::uint32_t>::max();
};

inline void update_best(Best& b, double score, std::uint32_t cell) {
  if (score < b.score || (score == b.score && cell < b.cell)) {
    b.score = score;
    b.cell = cell;
  }
}

ScanOrder match_grid_exhaustive(const std::vector<SpiralPoint>& spiral,
                                const GridDims& dims, const MatchConfig& cfg) {
  const std::size_t n = dims.n_cells();
  std::vector<std::uint32_t> cells(n);
  std::vector<std::uint32_t> pos(n);
  for (std::uint32_t i = 0; i < n; ++i) cells[i] = pos[i] = i;

  ScanOrder so;
  so.dims = dims;
  so.order.reserve(n);
  std::optional<std::uint32_t> prev;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t live = cells.size();
    Best best;
    const int nt = threads_for(live);
#ifdef _OPENMP
    if (nt > 1) {
      std::vector<Best> local(nt);
#pragma omp parallel num_threads(nt)
      {
        const int tid = omp_get_thread_num();
        Best mine;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(live); ++i) {
          const std::uint32_t cell = cells[static_cast<std::size_t>(i)];
          update_best(mine, match_score(cell, spiral[k], prev, cfg, dims),
                      cell);
        }
        local[tid] = mine;
      }
      for (const Best& b : local) update_best(best, b.score, b.cell);
    } else
#endif
    {
      for (std::size_t i = 0; i < live; ++i) {
        const std::uint32_t cell = cells[i];
        update_best(best, match_score(cell, spiral[k], prev, cfg, dims), cell);
      }
    }

    so.order.push_back(best.cell);
    prev = best.cell;
    const std::uint32_t last = cells.back();
    cells[pos[best.cell]] = last;
    pos[last] = pos[best.cell];
    cells.pop_back();
  }
  return so;
}

ScanOrder match_grid_accelerated(const std::vector<SpiralPoint>& spiral,
                                 const GridDims& dims, const MatchConfig& cfg) {
  const std::size_t n = dims.n_cells();
  UnassignedIndex index(dims);

  ScanOrder so;
  so.dims = dims;
  so.order.reserve(n);
  std::optional<std::uint32_t> prev;

  std::vector<UnassignedIndex::Hit> hits_f, hits_c;
  std::vector<std::uint32_t> candidates;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t remaining = n - k;
    const double coef_f = (1.0 - cfg.lambda_c) / cfg.eta_f;
    const double coef_c = prev.has_value() ? cfg.lambda_c / cfg.eta_c : 0.0;

    std::uint32_t winner;
    if (coef_f == 0.0 && coef_c == 0.0) {
      // Every score is zero; the tie rule picks the smallest linear index.
      winner = index.min_cell();
    } else {
      double px = 0.0, py = 0.0;
      if (prev.has_value()) {
        px = static_cast<double>(dims.col_of(*prev));
        py = static_cast<double>(dims.row_of(*prev));
      }

      std::uint64_t m = std::max<std::uint32_t>(cfg.candidate_count, 1);
      for (;;) {
        const std::uint32_t mq = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(m, remaining));

        candidates.clear();
        double radius_f = 0.0, radius_c = 0.0;
        bool covered_f = true, covered_c = true;
        if (coef_f > 0.0) {
          index.nearest(spiral[k].x, spiral[k].y, mq, hits_f);
          covered_f = hits_f.size() == remaining;
          if (!covered_f) radius_f = std::sqrt(hits_f.back().dist2);
          for (const auto& hit : hits_f) candidates.push_back(hit.cell);
        }
        if (coef_c > 0.0) {
          index.nearest(px, py, mq, hits_c);
          covered_c = hits_c.size() == remaining;
          if (!covered_c) radius_c = std::sqrt(hits_c.back().dist2);
          for (const auto& hit : hits_c) candidates.push_back(hit.cell);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());

        Best best;
        for (std::uint32_t cell : candidates)
          update_best(best, match_score(cell, spiral[k], prev, cfg, dims),
                      cell);

        const bool covered_all =
            (coef_f > 0.0 && covered_f) || (coef_c > 0.0 && covered_c) ||
            candidates.size() == remaining;
        if (covered_all) {
          winner = best.cell;
          break;
        }
        // Any cell outside both candidate sets is at least radius_f from the
        // spiral sample and radius_c from the previous cell. When both terms
        // are active, the triangle inequality through the cell additionally
        // forces d_f + d_c >= dist(sample, prev); minimizing the weighted sum
        // under these constraints gives a certified lower bound on every
        // unexamined score. A strictly better examined score then proves the
        // winner, ties included. The 1e-12 slack keeps the bound valid under
        // floating-point rounding of the distance chain.
        double lb = coef_f * radius_f + coef_c * radius_c;
        if (coef_f > 0.0 && coef_c > 0.0) {
          const double ddx = spiral[k].x - px;
          const double ddy = spiral[k].y - py;
          const double gap =
              std::sqrt(ddx * ddx + ddy * ddy) * (1.0 - 1e-12);
          const double lb_tri =
              (coef_f >= coef_c)
                  ? coef_f * radius_f +
                        coef_c * std::max(radius_c, gap - radius_f)
                  : coef_f * std::max(radius_f, gap - radius_c) +
                        coef_c * radius_c;
          lb = std::max(lb, lb_tri);
        }
        if (best.score < lb) {
          winner = best.cell;
          break;
        }
        m *= 2;
      }
    }

    so.order.push_back(winner);
    prev = winner;
    index.erase(winner);
  }
  return so;
}

} // namespace

ScanOrder match_grid(const std::vector<SpiralPoint>& spiral,
                     const GridDims& dims, const MatchConfig& cfg) {
  validate_dims(dims);
  validate_match_config(cfg);
  const std::size_t n = dims.n_cells();
  if (spiral.size() != n)
    throw std::invalid_argument("spiral has " + std::to_string(spiral.size()) +
                                " points but the grid has " +
                                std::to_string(n) + " cells");
  if (cfg.mode == MatchMode::exhaustive)
    return match_grid_exhaustive(spiral, dims, cfg);
  return match_grid_accelerated(spiral, dims, cfg);
}

ScanOrder fermat_scan(const GridDims& dims, const MatchConfig& cfg) {
  const SpiralParams params = SpiralParams::defaults_for(dims);
  return match_grid(gen_spiral_points(params), dims, cfg);
}

} // namespace spiralscan
