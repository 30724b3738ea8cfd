#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lawnsim/units.hpp"

namespace lawnsim {

// Evaluation grids for the plane/altitude experiments. Bounds are inclusive.
struct EvalGrid {
  double x_min_m = -1000.0;
  double x_max_m = 1000.0;
  double x_step_m = 5.0;
  double y_min_m = -1000.0;
  double y_max_m = 1000.0;
  double y_step_m = 5.0;
  double alt_min_m = 120.0;
  double alt_max_m = 300.0;
  double alt_step_m = 20.0;

  static std::vector<double> axis(double lo, double hi, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
    v.reserve(n > 0 ? n : 0);
    for (int i = 0; i < n; ++i) v.push_back(lo + i * step);
    return v;
  }
  std::vector<double> xs() const { return axis(x_min_m, x_max_m, x_step_m); }
  std::vector<double> ys() const { return axis(y_min_m, y_max_m, y_step_m); }
  std::vector<double> altitudes() const { return axis(alt_min_m, alt_max_m, alt_step_m); }
};

// Full parameter set of the reference deployment. Defaults reproduce the
// nominal two-BS corridor setup, so a default-constructed (or empty-config)
// scenario is the documented baseline.
struct Scenario {
  double fc_hz = 2e9;              // carrier frequency
  double bandwidth_hz = 10e6;      // total system bandwidth B
  double p_sum_dbm = 42.0;         // total BS transmit power
  int nx = 8;                      // UPA elements, x axis
  int ny = 4;                      // UPA elements, y axis
  double bs_half_spacing_m = 1000.0;  // BS antennas at (+-x_bs, 0, h_bs)
  double h_bs_m = 25.0;
  int n_symbols = 64;              // OFDM symbols M
  int n_subcarriers = 50;          // subcarriers N
  double delta_f_hz = 200e3;       // subcarrier spacing
  double t_cp_s = 1.25e-6;         // cyclic prefix duration
  double pilot_ratio = 0.2;        // fraction of subcarriers used for sensing
  double rcs_m2 = 0.1;             // drone radar cross section
  double hysteresis_db = 2.0;      // RSRP A3 hysteresis
  double d_th_m = 50.0;            // distance-criterion threshold
  double noise_dbm = -100.0;       // noise power sigma^2
  double sf_coeff_a = 4.64;        // shadow sigma = a * exp(-b * h)
  double sf_coeff_b = 0.0066;
  std::optional<double> gamma_override;  // fixed linear sensing SNR (SNR-sweep mode)
  EvalGrid grid;

  int n_antennas() const { return nx * ny; }
  double antenna_gain_db() const { return 20.0 * std::log10(static_cast<double>(n_antennas())); }
  double t_useful_s() const { return 1.0 / delta_f_hz; }
  double t_symbol_s() const { return t_useful_s() + t_cp_s; }
  double wavelength_m() const { return speed_of_light / fc_hz; }
  double sensing_bandwidth_hz() const { return pilot_ratio * bandwidth_hz; }
  // Sensing subcarriers per symbol; pilot_ratio * N rounded to nearest since
  // it denotes a subcarrier count.
  int sensing_subcarriers() const {
    return static_cast<int>(std::floor(pilot_ratio * n_subcarriers + 0.5));
  }
};

struct DronePosition {
  double x_m = 0.0;
  double y_m = 0.0;
  double h_m = 200.0;
};

struct LinkDistances {
  double serving_m;
  double target_m;
};

// Euclidean distances from the drone to the serving BS at (-x_bs, 0, h_bs)
// and the target BS at (+x_bs, 0, h_bs).
inline LinkDistances distances(const Scenario& s, const DronePosition& p) {
  const double dz = p.h_m - s.h_bs_m;
  const double ds = std::sqrt((p.x_m + s.bs_half_spacing_m) * (p.x_m + s.bs_half_spacing_m) +
                              p.y_m * p.y_m + dz * dz);
  const double dt = std::sqrt((p.x_m - s.bs_half_spacing_m) * (p.x_m - s.bs_half_spacing_m) +
                              p.y_m * p.y_m + dz * dz);
  return {ds, dt};
}

struct ValidationIssue {
  std::string code;    // stable machine-readable identifier
  std::string detail;
};

// Reports every violated invariant, not just the first.
inline std::vector<ValidationIssue> validate(const Scenario& s) {
  std::vector<ValidationIssue> out;
  const double grid_bw = s.n_subcarriers * s.delta_f_hz;
  if (!(std::fabs(grid_bw - s.bandwidth_hz) <= 1e-9 * std::fabs(s.bandwidth_hz))) {
    out.push_back({"grid-inconsistent",
                   "n_subcarriers * delta_f = " + std::to_string(grid_bw) +
                       " Hz does not equal bandwidth " + std::to_string(s.bandwidth_hz) + " Hz"});
  }
  if (s.sensing_subcarriers() < 2) {
    out.push_back({"crlb-degenerate",
                   "pilot_ratio * n_subcarriers = " + std::to_string(s.sensing_subcarriers()) +
                       " but at least 2 sensing subcarriers are required"});
  }
  if (!(s.bs_half_spacing_m > 0.0))
    out.push_back({"bad-geometry", "bs_half_spacing_m must be > 0"});
  if (!(s.h_bs_m > 0.0))
    out.push_back({"bad-geometry", "h_bs_m must be > 0"});
  if (!(s.fc_hz > 0.0))
    out.push_back({"bad-radio", "fc_hz must be > 0"});
  if (!(s.bandwidth_hz > 0.0))
    out.push_back({"bad-radio", "bandwidth_hz must be > 0"});
  if (s.nx < 1 || s.ny < 1)
    out.push_back({"bad-antennas", "nx and ny must each be >= 1"});
  if (!(s.pilot_ratio > 0.0) || s.pilot_ratio > 1.0)
    out.push_back({"bad-pilot-ratio", "pilot_ratio must lie in (0, 1]"});
  return out;
}

}  // namespace lawnsim
