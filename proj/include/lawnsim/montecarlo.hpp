#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawnsim/criteria.hpp"
#include "lawnsim/detail/parallel.hpp"
#include "lawnsim/rng.hpp"
#include "lawnsim/scenario.hpp"

namespace lawnsim {

struct TrialBatch {
  DronePosition point;
  int trials = 0;
  std::uint64_t seed = 0;
  long hits_rsrp = 0;
  long hits_dist = 0;
  long hits_joint = 0;

  double p_rsrp() const { return static_cast<double>(hits_rsrp) / trials; }
  double p_dist() const { return static_cast<double>(hits_dist) / trials; }
  double p_joint() const { return static_cast<double>(hits_joint) / trials; }
};

// Event-level sampling of the two activation conditions. Per trial: two
// independent shadow draws (serving/target) and two independent ranging-error
// draws, all four mutually independent; both events are evaluated on the same
// draws so the union identity holds exactly sample-wise. Per-trial seeds make
// the batch deterministic and chunkable across workers.
inline TrialBatch run_batch(const Scenario& s, const DronePosition& p, int trials,
                            std::uint64_t seed, int n_threads = 1) {
  if (trials < 1) throw std::invalid_argument("run_batch: trials must be >= 1");
  const auto d = distances(s, p);
  const double sf = sigma_sf_db(s, p.h_m);
  const double pl_gap_db = pathloss_los_db(s.fc_hz, d.serving_m) -
                           pathloss_los_db(s.fc_hz, d.target_m);
  const double sigma_d_s = std::sqrt(crlb_distance_m2(s, d.serving_m));
  const double sigma_d_t = std::sqrt(crlb_distance_m2(s, d.target_m));

  struct Counts {
    long r = 0, di = 0, j = 0;
  };
  const int workers = std::max(1, n_threads);
  std::vector<Counts> part(workers);
  detail::parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
    Counts& c = part[w];
    for (int t = static_cast<int>(w); t < trials; t += workers) {
      SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
      const double eps_s = sf * rng.normal();
      const double eps_t = sf * rng.normal();
      const double dhat_s = d.serving_m + sigma_d_s * rng.normal();
      const double dhat_t = d.target_m + sigma_d_t * rng.normal();
      // P_t - P_s > hysteresis reduces to the path-loss gap plus shadow gap
      const bool ev_rsrp = (pl_gap_db + eps_s - eps_t) > s.hysteresis_db;
      const bool ev_dist = (dhat_s - dhat_t) > s.d_th_m;
      c.r += ev_rsrp;
      c.di += ev_dist;
      c.j += (ev_rsrp || ev_dist);
    }
  });

  TrialBatch b;
  b.point = p;
  b.trials = trials;
  b.seed = seed;
  for (const auto& c : part) {
    b.hits_rsrp += c.r;
    b.hits_dist += c.di;
    b.hits_joint += c.j;
  }
  return b;
}

struct GridValidationRow {
  DronePosition point;
  std::string criterion;
  double p_analytic = 0.0;
  double p_empirical = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool pass = false;
};

struct GridValidationReport {
  std::vector<GridValidationRow> rows;
  int n_pass = 0;
  double pass_fraction = 0.0;
  bool pass = false;  // >= 99% of (point, criterion) pairs inside their CI
};

// Wilson score interval; well behaved at p near 0 and 1 where the Wald
// interval collapses to a point.
inline std::pair<double, double> wilson_ci(long hits, long n, double z) {
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

// Analytic-vs-empirical consistency over a point list. `perturbation` shifts
// the analytic values (fault-injection hook); a genuine implementation must
// report the shifted values as outside the CIs.
inline GridValidationReport validate_grid(const Scenario& s, std::span<const DronePosition> pts,
                                          int trials, std::uint64_t seed, int n_threads = 1,
                                          double perturbation = 0.0) {
  if (pts.empty()) throw std::invalid_argument("validate_grid: empty point list");
  constexpr double z99 = 2.5758293035489004;  // two-sided 99% normal quantile
  GridValidationReport rep;
  std::vector<TrialBatch> batches(pts.size());
  detail::parallel_for(pts.size(), 1, [&](std::size_t i) {
    batches[i] = run_batch(s, pts[i], trials, derive_seed(seed, i), n_threads);
  });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto probs = ho_probabilities(s, pts[i]);
    const TrialBatch& b = batches[i];
    const struct {
      const char* name;
      double analytic;
      long hits;
    } items[3] = {{"rsrp", probs.p_rsrp, b.hits_rsrp},
                  {"dist", probs.p_dist, b.hits_dist},
                  {"joint", probs.p_joint, b.hits_joint}};
    for (const auto& it : items) {
      GridValidationRow row;
      row.point = pts[i];
      row.criterion = it.name;
      row.p_analytic = it.analytic + perturbation;
      row.p_empirical = static_cast<double>(it.hits) / trials;
      const auto ci = wilson_ci(it.hits, trials, z99);
      row.ci_lo = ci.first;
      row.ci_hi = ci.second;
      row.pass = (row.p_analytic >= row.ci_lo && row.p_analytic <= row.ci_hi);
      rep.n_pass += row.pass;
      rep.rows.push_back(row);
    }
  }
  rep.pass_fraction = static_cast<double>(rep.n_pass) / rep.rows.size();
  rep.pass = rep.pass_fraction >= 0.99;
  return rep;
}

}  // namespace lawnsim
