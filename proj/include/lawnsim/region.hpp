#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawnsim/criteria.hpp"
#include "lawnsim/detail/parallel.hpp"
#include "lawnsim/scenario.hpp"

namespace lawnsim {

enum class Criterion { rsrp, dist, joint };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::rsrp: return "rsrp";
    case Criterion::dist: return "dist";
    default: return "joint";
  }
}

enum class SolverStatus { bisection, grid_fallback, unbounded };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::bisection: return "bisection";
    case SolverStatus::grid_fallback: return "grid-fallback";
    default: return "unbounded";
  }
}

inline double criterion_probability(const Scenario& s, Criterion c, double x_m, double y_m,
                                    double h_m) {
  const auto d = distances(s, {x_m, y_m, h_m});
  switch (c) {
    case Criterion::rsrp:
      return p_ho_rsrp(s, d.serving_m, d.target_m, h_m);
    case Criterion::dist:
      return p_ho_dist(s, d.serving_m, d.target_m);
    default:
      return p_ho_joint(p_ho_rsrp(s, d.serving_m, d.target_m, h_m),
                        p_ho_dist(s, d.serving_m, d.target_m));
  }
}

struct BoundarySolve {
  double x_m = 0.0;
  SolverStatus status = SolverStatus::unbounded;
};

inline constexpr double boundary_prob_tol = 1e-6;

namespace detail {

// Level-crossing solver on [lo, hi] for a probability profile that rises
// through `level`. A 201-point pre-scan locates the crossings of the level:
// exactly one upward crossing and none downward means bisection inside the
// bracketing scan cell is sound; several crossings (a genuinely non-monotone
// profile around the level) fall back to a 1 m grid walk that returns the
// first upward crossing. The activation probability of the distance criterion
// is allowed to wiggle in its deep tails (the ranging variance grows toward
// the cell edges faster than the numerator), so monotonicity is judged at the
// requested level, not pointwise.
template <typename Fn>
BoundarySolve solve_level_crossing(Fn&& prob, double lo, double hi, double level) {
  constexpr int scan_points = 201;
  std::vector<double> px(scan_points), pv(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    px[i] = lo + (hi - lo) * i / (scan_points - 1);
    pv[i] = prob(px[i]);
  }
  if (pv.front() >= level) return {lo, SolverStatus::unbounded};
  if (pv.back() < level) return {hi, SolverStatus::unbounded};

  int up = 0, down = 0, bracket = -1;
  for (int i = 0; i + 1 < scan_points; ++i) {
    if (pv[i] < level && pv[i + 1] >= level) {
      ++up;
      if (bracket < 0) bracket = i;
    } else if (pv[i] >= level && pv[i + 1] < level) {
      ++down;
    }
  }

  if (up != 1 || down != 0) {
    // ambiguous profile: first upward crossing at 1 m resolution
    double prev = pv.front();
    for (double x = lo + 1.0; x <= hi; x += 1.0) {
      const double p = prob(x);
      if (prev < level && p >= level) return {x, SolverStatus::grid_fallback};
      prev = p;
    }
    return {hi, SolverStatus::unbounded};
  }

  double a = px[bracket], b = px[bracket + 1];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double pm = prob(mid);
    if (std::fabs(pm - level) <= boundary_prob_tol * 0.5) return {mid, SolverStatus::bisection};
    if (pm < level)
      a = mid;
    else
      b = mid;
    if (b - a < 1e-9) break;
  }
  const double x = 0.5 * (a + b);
  if (std::fabs(prob(x) - level) <= boundary_prob_tol) return {x, SolverStatus::bisection};
  return {x, SolverStatus::grid_fallback};
}

}  // namespace detail

// Inverse of the activation probability along x on [-x_bs, x_bs].
inline BoundarySolve solve_boundary(const Scenario& s, Criterion c, double y_m, double h_m,
                                    double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("solve_boundary: level must lie in (0,1)");
  return detail::solve_level_crossing(
      [&](double x) { return criterion_probability(s, c, x, y_m, h_m); },
      -s.bs_half_spacing_m, s.bs_half_spacing_m, level);
}

// The handover region along one y-row: x interval where the activation
// probability runs from 0.1 to 0.9, and its length.
struct HoRegion {
  Criterion criterion = Criterion::rsrp;
  double y_m = 0.0;
  double h_m = 0.0;
  double x_lo_m = 0.0;
  double x_hi_m = 0.0;
  double length_m = 0.0;
  SolverStatus status = SolverStatus::unbounded;
};

inline HoRegion region_for(const Scenario& s, Criterion c, double y_m, double h_m) {
  HoRegion r;
  r.criterion = c;
  r.y_m = y_m;
  r.h_m = h_m;
  const auto lo = solve_boundary(s, c, y_m, h_m, 0.1);
  const auto hi = solve_boundary(s, c, y_m, h_m, 0.9);
  if (lo.status == SolverStatus::unbounded || hi.status == SolverStatus::unbounded) {
    r.status = SolverStatus::unbounded;
    return r;
  }
  r.x_lo_m = lo.x_m;
  r.x_hi_m = hi.x_m;
  r.length_m = hi.x_m - lo.x_m;
  r.status = (lo.status == SolverStatus::grid_fallback || hi.status == SolverStatus::grid_fallback)
                 ? SolverStatus::grid_fallback
                 : SolverStatus::bisection;
  return r;
}

struct PlaneUnion {
  double x_lo_m = 0.0;
  double x_hi_m = 0.0;
  int rows_used = 0;
  int rows_unbounded = 0;
};

// Union of the per-row regions over the y grid: min of the lower boundaries,
// max of the upper ones. Rows whose region extends past the cell edge are
// skipped and counted.
inline PlaneUnion plane_union_region(const Scenario& s, Criterion c, double h_m,
                                     std::span<const double> y_grid, int n_threads = 1) {
  if (y_grid.empty()) throw std::invalid_argument("plane_union_region: empty y grid");
  std::vector<HoRegion> rows(y_grid.size());
  detail::parallel_for(y_grid.size(), n_threads,
                       [&](std::size_t i) { rows[i] = region_for(s, c, y_grid[i], h_m); });
  PlaneUnion u;
  bool first = true;
  for (const auto& r : rows) {
    if (r.status == SolverStatus::unbounded) {
      ++u.rows_unbounded;
      continue;
    }
    if (first) {
      u.x_lo_m = r.x_lo_m;
      u.x_hi_m = r.x_hi_m;
      first = false;
    } else {
      u.x_lo_m = std::min(u.x_lo_m, r.x_lo_m);
      u.x_hi_m = std::max(u.x_hi_m, r.x_hi_m);
    }
    ++u.rows_used;
  }
  if (first) throw std::runtime_error("plane_union_region: every row unbounded");
  return u;
}

// Arithmetic mean of the per-row region lengths over rows with finite regions.
inline double avg_region_length(const Scenario& s, Criterion c, double h_m,
                                std::span<const double> y_grid, int n_threads = 1) {
  if (y_grid.empty()) throw std::invalid_argument("avg_region_length: empty y grid");
  std::vector<HoRegion> rows(y_grid.size());
  detail::parallel_for(y_grid.size(), n_threads,
                       [&](std::size_t i) { rows[i] = region_for(s, c, y_grid[i], h_m); });
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.status == SolverStatus::unbounded) continue;
    sum += r.length_m;
    ++n;
  }
  if (n == 0) throw std::runtime_error("avg_region_length: every row unbounded");
  return sum / n;
}

// Mean over the altitude grid of 1 - L_a(h)/L_baseline(h): the average
// shrinkage of one criterion's region relative to another's in 3D space,
// joint vs rsrp by default. ratio_of_grand_means toggles the alternative
// averaging order (ratio of the altitude-summed lengths).
inline double reduction_3d(const Scenario& s, std::span<const double> y_grid,
                           std::span<const double> alt_grid, int n_threads = 1,
                           bool ratio_of_grand_means = false, Criterion a = Criterion::joint,
                           Criterion baseline = Criterion::rsrp) {
  if (y_grid.empty() || alt_grid.empty())
    throw std::invalid_argument("reduction_3d: empty grid");
  double sum_ratio = 0.0, sum_base = 0.0, sum_a = 0.0;
  for (double h : alt_grid) {
    const double lb = avg_region_length(s, baseline, h, y_grid, n_threads);
    const double la = avg_region_length(s, a, h, y_grid, n_threads);
    sum_ratio += 1.0 - la / lb;
    sum_base += lb;
    sum_a += la;
  }
  if (ratio_of_grand_means) return 1.0 - sum_a / sum_base;
  return sum_ratio / static_cast<double>(alt_grid.size());
}

enum class ImprovementConvention { ratio_of_means, mean_of_ratios };

// Average activation-probability improvement of criterion `a` over the
// baseline, evaluated on the grid points inside the baseline's 3D HO region
// (baseline probability in [0.1, 0.9]). gamma_override, when set, replaces
// the link-budget sensing SNR while the baseline region stays link-budget
// based (the RSRP baseline does not depend on the sensing SNR at all).
inline double activation_improvement(const Scenario& s, Criterion a, Criterion baseline,
                                     std::optional<double> gamma_override,
                                     ImprovementConvention conv =
                                         ImprovementConvention::ratio_of_means,
                                     int n_threads = 1) {
  const auto xs = s.grid.xs();
  const auto ys = s.grid.ys();
  const auto hs = s.grid.altitudes();
  Scenario overridden = s;
  overridden.gamma_override = gamma_override;

  struct RowAcc {
    double sum_base = 0.0, sum_a = 0.0, sum_ratio = 0.0;
    long n = 0;
  };
  std::vector<RowAcc> acc(ys.size());
  detail::parallel_for(ys.size(), n_threads, [&](std::size_t yi) {
    RowAcc& ra = acc[yi];
    for (double h : hs) {
      for (double x : xs) {
        const double pb = criterion_probability(s, baseline, x, ys[yi], h);
        if (pb < 0.1 || pb > 0.9) continue;
        const double pa = criterion_probability(overridden, a, x, ys[yi], h);
        ra.sum_base += pb;
        ra.sum_a += pa;
        ra.sum_ratio += (pa - pb) / pb;
        ra.n += 1;
      }
    }
  });
  double sum_base = 0.0, sum_a = 0.0, sum_ratio = 0.0;
  long n = 0;
  for (const auto& ra : acc) {
    sum_base += ra.sum_base;
    sum_a += ra.sum_a;
    sum_ratio += ra.sum_ratio;
    n += ra.n;
  }
  if (n == 0) throw std::runtime_error("activation_improvement: baseline region is empty");
  if (conv == ImprovementConvention::mean_of_ratios) return sum_ratio / n;
  return (sum_a - sum_base) / sum_base;
}

struct RateDiffMap {
  std::vector<double> xs_m;
  std::vector<double> ys_m;
  std::vector<double> diff_bps;  // row-major, index = yi * xs.size() + xi
  double max_diff_bps = 0.0;
  double argmax_x_m = 0.0;
  double argmax_y_m = 0.0;

  double at(std::size_t xi, std::size_t yi) const { return diff_bps[yi * xs_m.size() + xi]; }
};

// Effective-rate difference R_eff(joint) - R_eff(rsrp) over the x-y plane at
// one altitude, using the mean link budget for the rates.
inline RateDiffMap rate_diff_map(const Scenario& s, double h_m, int n_threads = 1) {
  RateDiffMap m;
  m.xs_m = s.grid.xs();
  m.ys_m = s.grid.ys();
  m.diff_bps.assign(m.xs_m.size() * m.ys_m.size(), 0.0);
  detail::parallel_for(m.ys_m.size(), n_threads, [&](std::size_t yi) {
    for (std::size_t xi = 0; xi < m.xs_m.size(); ++xi) {
      const auto d = distances(s, {m.xs_m[xi], m.ys_m[yi], h_m});
      const double pr = p_ho_rsrp(s, d.serving_m, d.target_m, h_m);
      const double pj = p_ho_joint(pr, p_ho_dist(s, d.serving_m, d.target_m));
      const double rs = comm_rate_bps(s, d.serving_m);
      const double rt = comm_rate_bps(s, d.target_m);
      m.diff_bps[yi * m.xs_m.size() + xi] =
          effective_rate_bps(pj, rs, rt) - effective_rate_bps(pr, rs, rt);
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.diff_bps.size(); ++i)
    if (m.diff_bps[i] > m.diff_bps[best]) best = i;
  m.max_diff_bps = m.diff_bps[best];
  m.argmax_x_m = m.xs_m[best % m.xs_m.size()];
  m.argmax_y_m = m.ys_m[best / m.xs_m.size()];
  return m;
}

}  // namespace lawnsim
