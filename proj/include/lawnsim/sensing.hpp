#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lawnsim/channel.hpp"
#include "lawnsim/rng.hpp"
#include "lawnsim/scenario.hpp"
#include "lawnsim/units.hpp"

namespace lawnsim {

struct crlb_degenerate_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Monostatic two-way path loss with the RCS term:
//   L_s = 2 L - 10 log10(rcs) + 10 log10(lambda^2 / 4 pi)
inline double sensing_pathloss_db(double fc_hz, double d_m, double rcs_m2) {
  if (!(rcs_m2 > 0.0))
    throw std::domain_error("sensing_pathloss_db: rcs must be > 0");
  const double lam = speed_of_light / fc_hz;
  return 2.0 * pathloss_los_db(fc_hz, d_m) - 10.0 * std::log10(rcs_m2) +
         10.0 * std::log10(lam * lam / (4.0 * pi));
}

// Per-subcarrier sensing SNR gamma = beta_s * Nt^2 * P_sum / (N * sigma^2).
// An SNR-sweep override on the scenario short-circuits the link budget.
// Clamped below at 1e-12 so pathological configs yield a finite CRLB; the
// clamp is surfaced through diagnostics::gamma_clamp_hits.
inline double gamma_linear(const Scenario& s, double d_m, double shadow_db = 0.0) {
  if (s.gamma_override) return *s.gamma_override;
  const double ls = sensing_pathloss_db(s.fc_hz, d_m, s.rcs_m2);
  const double g_db = s.p_sum_dbm - s.noise_dbm + s.antenna_gain_db() - (ls + shadow_db) -
                      linear_to_db(static_cast<double>(s.n_subcarriers));
  double g = db_to_linear(g_db);
  if (g < 1e-12) {
    diagnostics::gamma_clamp_hits().fetch_add(1, std::memory_order_relaxed);
    g = 1e-12;
  }
  return g;
}

// Distance-estimation variance bound:
//   CRLB(d) = 3 c^2 / (8 pi^2 gamma df^2 M rN (rN-1) (2 rN-1))
// rho_n is the per-symbol sensing subcarrier count and must be >= 2.
inline double crlb_exact_m2(double gamma, double delta_f_hz, int m_symbols, int rho_n) {
  if (rho_n < 2)
    throw crlb_degenerate_error("crlb-degenerate: need at least 2 sensing subcarriers");
  if (!(gamma > 0.0))
    throw std::domain_error("crlb_exact_m2: gamma must be > 0");
  const double poly = static_cast<double>(rho_n) * (rho_n - 1.0) * (2.0 * rho_n - 1.0);
  return 3.0 * speed_of_light * speed_of_light /
         (8.0 * pi * pi * gamma * delta_f_hz * delta_f_hz * m_symbols * poly);
}

// Large-rho_n approximation: CRLB(d) ~ 3 c^2 / (16 pi^2 gamma rho M N B_s^2).
// Within 5% of the exact bound once rho * N >= 32.
inline double crlb_approx_m2(double gamma, double rho, int m_symbols, int n_subcarriers,
                             double b_s_hz) {
  if (!(gamma > 0.0))
    throw std::domain_error("crlb_approx_m2: gamma must be > 0");
  return 3.0 * speed_of_light * speed_of_light /
         (16.0 * pi * pi * gamma * rho * m_symbols * n_subcarriers * b_s_hz * b_s_hz);
}

// Full link-budget chain from geometry to the bound; analytic maps use the
// mean budget (shadow = 0).
inline double crlb_distance_m2(const Scenario& s, double d_m, double shadow_db = 0.0) {
  return crlb_exact_m2(gamma_linear(s, d_m, shadow_db), s.delta_f_hz, s.n_symbols,
                       s.sensing_subcarriers());
}

struct SensingBudget {
  double pathloss_sens_db;
  double gamma;
  double crlb_m2;
  double sigma_d_m;
};

inline SensingBudget sensing_link_budget(const Scenario& s, double d_m, double shadow_db = 0.0) {
  SensingBudget b{};
  b.pathloss_sens_db = sensing_pathloss_db(s.fc_hz, d_m, s.rcs_m2);
  b.gamma = gamma_linear(s, d_m, shadow_db);
  b.crlb_m2 = crlb_exact_m2(b.gamma, s.delta_f_hz, s.n_symbols, s.sensing_subcarriers());
  b.sigma_d_m = std::sqrt(b.crlb_m2);
  return b;
}

// One draw of the Gaussian ranging-error model d_hat ~ N(d, CRLB(d)).
inline double sample_distance_estimate(double d_true_m, double crlb_m2, std::uint64_t seed) {
  if (!(crlb_m2 >= 0.0))
    throw std::domain_error("sample_distance_estimate: crlb must be non-negative");
  SplitMix64 rng(seed);
  return d_true_m + std::sqrt(crlb_m2) * rng.normal();
}

}  // namespace lawnsim
