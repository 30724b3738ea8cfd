#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "lawnsim/scenario.hpp"
#include "lawnsim/units.hpp"

namespace lawnsim {

namespace diagnostics {
// Counters for conditions that are survivable but worth surfacing: LoS model
// applied below its 100 m validity floor (no NLoS closed form exists for the
// aerial model), and sensing SNR clamped in pathological configs.
inline std::atomic<long>& nlos_fallback_hits() {
  static std::atomic<long> n{0};
  return n;
}
inline std::atomic<long>& gamma_clamp_hits() {
  static std::atomic<long> n{0};
  return n;
}
}  // namespace diagnostics

// Urban-macro aerial LoS path loss, d in meters, carrier in GHz:
//   L = 28.0 + 22 log10(d) + 20 log10(fc_GHz)
inline double pathloss_los_db(double fc_hz, double d_m) {
  if (!(d_m >= 1.0))
    throw std::domain_error("pathloss_los_db: distance below the 1 m model floor");
  if (d_m < 100.0)
    diagnostics::nlos_fallback_hits().fetch_add(1, std::memory_order_relaxed);
  return 28.0 + 22.0 * std::log10(d_m) + 20.0 * std::log10(fc_hz / 1e9);
}

// Altitude-dependent shadow-fading std deviation, sigma = a * exp(-b * h) dB.
inline double sigma_sf_db(const Scenario& s, double h_m) {
  if (!(h_m >= 0.0))
    throw std::domain_error("sigma_sf_db: altitude must be non-negative");
  return s.sf_coeff_a * std::exp(-s.sf_coeff_b * h_m);
}

struct LinkBudget {
  double pathloss_db;
  double sigma_sf_db;
  double rsrp_mean_dbm;  // shadow excluded; it is a random variable, not a mean
  double snr_comm;       // linear, with the supplied shadow realization
  double rate_bps;
};

// Linear communication SNR: beta_c * Nt^2 * P_sum / (N * sigma^2), where
// beta_c = 10^(-(L + shadow)/10). shadow_db = 0 gives the mean link budget.
inline double comm_snr_linear(const Scenario& s, double d_m, double shadow_db = 0.0) {
  const double pl = pathloss_los_db(s.fc_hz, d_m);
  const double snr_db = s.p_sum_dbm - s.noise_dbm + s.antenna_gain_db() - (pl + shadow_db) -
                        linear_to_db(static_cast<double>(s.n_subcarriers));
  return db_to_linear(snr_db);
}

// Shannon rate over the communication bandwidth (1 - rho) * B.
inline double comm_rate_bps(const Scenario& s, double d_m, double shadow_db = 0.0) {
  if (s.pilot_ratio >= 1.0) return 0.0;
  return (1.0 - s.pilot_ratio) * s.bandwidth_hz * std::log2(1.0 + comm_snr_linear(s, d_m, shadow_db));
}

inline LinkBudget comm_link_budget(const Scenario& s, double d_m, double h_m,
                                   double shadow_db = 0.0) {
  LinkBudget b{};
  b.pathloss_db = pathloss_los_db(s.fc_hz, d_m);
  b.sigma_sf_db = sigma_sf_db(s, h_m);
  b.rsrp_mean_dbm = s.p_sum_dbm + s.antenna_gain_db() - b.pathloss_db;
  b.snr_comm = comm_snr_linear(s, d_m, shadow_db);
  b.rate_bps = comm_rate_bps(s, d_m, shadow_db);
  return b;
}

}  // namespace lawnsim
