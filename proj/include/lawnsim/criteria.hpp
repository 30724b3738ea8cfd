#pragma once

#include <algorithm>
#include <cmath>

#include "lawnsim/channel.hpp"
#include "lawnsim/scenario.hpp"
#include "lawnsim/sensing.hpp"

namespace lawnsim {

// Gaussian tail probability Q(x) = P[N(0,1) > x].
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace detail {
// Probabilities are kept strictly inside (0,1) so downstream logs stay
// finite. The upper bound is the largest double below 1 (1 - 1e-300 is not
// representable in binary64).
inline double clamp_prob(double p) {
  constexpr double hi = 1.0 - 1.1102230246251565e-16;  // nextafter(1, 0)
  return std::clamp(p, 1e-300, hi);
}
}  // namespace detail

// A3-style activation: target RSRP exceeds serving RSRP by the hysteresis.
// Transmit power and array gain cancel, leaving only the path-loss gap:
//   Q((hyst + L(d_t) - L(d_s)) / (sqrt(2) sigma_sf))
inline double p_ho_rsrp(const Scenario& s, double d_s_m, double d_t_m, double h_m) {
  const double num = s.hysteresis_db + pathloss_los_db(s.fc_hz, d_t_m) -
                     pathloss_los_db(s.fc_hz, d_s_m);
  return detail::clamp_prob(q_function(num / (std::sqrt(2.0) * sigma_sf_db(s, h_m))));
}

// Sensing-distance activation: estimated serving distance exceeds the target
// estimate by more than the threshold. Ranging errors on the two links are
// independent Gaussians with variance CRLB(d), so
//   Q((d_th + d_t - d_s) / sqrt(CRLB(d_t) + CRLB(d_s)))
inline double p_ho_dist(const Scenario& s, double d_s_m, double d_t_m) {
  const double var = crlb_distance_m2(s, d_t_m) + crlb_distance_m2(s, d_s_m);
  const double num = s.d_th_m + d_t_m - d_s_m;
  return detail::clamp_prob(q_function(num / std::sqrt(var)));
}

// Either condition triggers; the two events are independent. Evaluated as
// a + (1-a)b, which equals a + b - ab but cannot dip below max(a, b) in
// floating point.
inline double p_ho_joint(double p_rsrp, double p_dist) {
  return p_rsrp + (1.0 - p_rsrp) * p_dist;
}

struct HoProbabilities {
  double p_rsrp;
  double p_dist;
  double p_joint;
};

inline HoProbabilities ho_probabilities(const Scenario& s, const DronePosition& p) {
  const auto d = distances(s, p);
  HoProbabilities out{};
  out.p_rsrp = p_ho_rsrp(s, d.serving_m, d.target_m, p.h_m);
  out.p_dist = p_ho_dist(s, d.serving_m, d.target_m);
  out.p_joint = p_ho_joint(out.p_rsrp, out.p_dist);
  return out;
}

// Activation-probability-weighted blend of the pre- and post-handover rates.
inline double effective_rate_bps(double p_ho, double r_s_bps, double r_t_bps) {
  return (1.0 - p_ho) * r_s_bps + p_ho * r_t_bps;
}

}  // namespace lawnsim
