#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "lawnsim/detail/parallel.hpp"
#include "lawnsim/rng.hpp"
#include "lawnsim/scenario.hpp"
#include "lawnsim/sensing.hpp"
#include "lawnsim/units.hpp"

namespace lawnsim {

enum class PilotAllocation { contiguous, comb };

// Frequency-domain echo frame: samples r[m][k] on the sensing subcarriers,
//   r = alpha * a * exp(-j 2 pi n df tau) + w
// with known unit-modulus symbols a. The noise w is circular complex Gaussian
// with per-quadrature variance alpha^2 / gamma, which is the convention under
// which the closed-form distance CRLB used everywhere else is exact.
struct EchoFrame {
  int m_symbols = 0;
  int n_subcarriers = 0;            // full OFDM grid size N (sets the search resolution)
  double delta_f_hz = 0.0;
  std::vector<int> subcarrier_idx;  // sensing set, identical for every symbol
  std::vector<std::complex<double>> symbols;  // m_symbols x |set|, row-major
  std::vector<std::complex<double>> samples;  // same layout
  double alpha = 0.0;
  double tau_true_s = 0.0;
};

// Unit-modulus QPSK symbols, deterministic in the seed.
inline std::vector<std::complex<double>> gen_symbols(int m_symbols, int per_symbol,
                                                     std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(m_symbols) * per_symbol);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (auto& v : a) {
    const std::uint64_t bits = rng.next();
    const double re = (bits & 1) ? inv_sqrt2 : -inv_sqrt2;
    const double im = (bits & 2) ? inv_sqrt2 : -inv_sqrt2;
    v = {re, im};
  }
  return a;
}

inline std::vector<int> sensing_subcarrier_set(int n_subcarriers, int rho_n,
                                               PilotAllocation alloc) {
  std::vector<int> idx(rho_n);
  if (alloc == PilotAllocation::contiguous) {
    for (int k = 0; k < rho_n; ++k) idx[k] = k;
  } else {
    const int stride = n_subcarriers / rho_n;
    for (int k = 0; k < rho_n; ++k) idx[k] = k * stride;
  }
  return idx;
}

// Synthesizes the noisy echo at round-trip delay tau = 2 d / c with the
// requested per-subcarrier SNR. Only delays below one ambiguity period 1/df
// are meaningful here; the oracle is a theory check, not a ranging product.
inline EchoFrame gen_echo(const Scenario& s, double d_m, double gamma, std::uint64_t seed,
                          PilotAllocation alloc = PilotAllocation::contiguous) {
  const int rho_n = s.sensing_subcarriers();
  if (rho_n < 2) throw crlb_degenerate_error("gen_echo: need at least 2 sensing subcarriers");
  if (!(gamma > 0.0)) throw std::domain_error("gen_echo: gamma must be > 0");

  EchoFrame f;
  f.m_symbols = s.n_symbols;
  f.n_subcarriers = s.n_subcarriers;
  f.delta_f_hz = s.delta_f_hz;
  f.subcarrier_idx = sensing_subcarrier_set(s.n_subcarriers, rho_n, alloc);
  f.alpha = 1.0;  // estimator output is invariant to the overall gain
  f.tau_true_s = 2.0 * d_m / speed_of_light;
  f.symbols = gen_symbols(f.m_symbols, rho_n, derive_seed(seed, 0));

  const double sigma_q = f.alpha / std::sqrt(gamma);  // per-quadrature noise std
  SplitMix64 noise(derive_seed(seed, 1));
  f.samples.resize(f.symbols.size());
  for (int m = 0; m < f.m_symbols; ++m) {
    for (int k = 0; k < rho_n; ++k) {
      const std::size_t i = static_cast<std::size_t>(m) * rho_n + k;
      const double phase = -2.0 * pi * f.subcarrier_idx[k] * f.delta_f_hz * f.tau_true_s;
      const std::complex<double> sig =
          f.alpha * f.symbols[i] * std::complex<double>(std::cos(phase), std::sin(phase));
      f.samples[i] = sig + std::complex<double>(sigma_q * noise.normal(), sigma_q * noise.normal());
    }
  }
  return f;
}

struct DelayEstimate {
  double tau_s = 0.0;
  double d_m = 0.0;
};

// Maximum-likelihood delay: the correlator
//   tau_hat = argmax Re{ sum conj(a) r exp(+j 2 pi n df tau) }
// evaluated over one ambiguity period at 1/(64 N df) resolution, then refined
// with a parabolic fit around the peak (circularly, the correlator is
// periodic). The period is 1/df for a contiguous allocation; an index set
// with a common divisor g (a comb) repeats every 1/(g df), so estimates are
// reported modulo that shorter period. Distance follows as d = c tau / 2.
inline DelayEstimate ml_delay_estimate(const EchoFrame& f) {
  const int rho_n = static_cast<int>(f.subcarrier_idx.size());
  if (rho_n == 0 || f.samples.empty())
    throw std::invalid_argument("ml_delay_estimate: empty frame");

  int g_common = 0;
  for (int n : f.subcarrier_idx) g_common = std::gcd(g_common, n);
  if (g_common == 0)
    throw std::invalid_argument("ml_delay_estimate: index set carries no delay information");

  // collapse over symbols first; the correlator only needs per-subcarrier sums
  std::vector<std::complex<double>> per_sub(rho_n, {0.0, 0.0});
  double energy = 0.0;
  for (int m = 0; m < f.m_symbols; ++m) {
    for (int k = 0; k < rho_n; ++k) {
      const std::size_t i = static_cast<std::size_t>(m) * rho_n + k;
      per_sub[k] += std::conj(f.symbols[i]) * f.samples[i];
      energy += std::norm(f.samples[i]);
    }
  }
  if (energy == 0.0) throw std::invalid_argument("ml_delay_estimate: all-zero frame");

  const int grid_n = 64 * f.n_subcarriers / g_common;
  const double step = 1.0 / (64.0 * f.n_subcarriers * f.delta_f_hz);
  std::vector<double> corr(grid_n);
  for (int g = 0; g < grid_n; ++g) {
    const double tau = g * step;
    double acc = 0.0;
    for (int k = 0; k < rho_n; ++k) {
      const double ph = 2.0 * pi * f.subcarrier_idx[k] * f.delta_f_hz * tau;
      acc += per_sub[k].real() * std::cos(ph) - per_sub[k].imag() * std::sin(ph);
    }
    corr[g] = acc;
  }

  int peak = 0;
  for (int g = 1; g < grid_n; ++g)
    if (corr[g] > corr[peak]) peak = g;

  const double ym1 = corr[(peak - 1 + grid_n) % grid_n];
  const double y0 = corr[peak];
  const double yp1 = corr[(peak + 1) % grid_n];
  const double denom = ym1 - 2.0 * y0 + yp1;
  const double offset = (denom != 0.0) ? 0.5 * (ym1 - yp1) / denom : 0.0;

  double tau = (peak + offset) * step;
  const double period = grid_n * step;  // 1/(g df)
  tau = std::fmod(tau, period);
  if (tau < 0.0) tau += period;

  return {tau, speed_of_light * tau / 2.0};
}

// Closed-form bound generalized to an arbitrary subcarrier index set. For the
// contiguous set {0..rN-1} the squared-index sum is rN(rN-1)(2rN-1)/6 and this
// reduces exactly to crlb_exact_m2; a comb set has a larger squared-index sum
// and therefore a lower bound.
inline double crlb_for_indices(double gamma, double delta_f_hz, int m_symbols,
                               std::span<const int> idx) {
  double sum_sq = 0.0;
  for (int n : idx) sum_sq += static_cast<double>(n) * n;
  if (sum_sq <= 0.0)
    throw std::domain_error("crlb_for_indices: index set carries no delay information");
  return speed_of_light * speed_of_light /
         (16.0 * pi * pi * gamma * delta_f_hz * delta_f_hz * m_symbols * sum_sq);
}

struct EfficiencyRow {
  double gamma_db = 0.0;
  double d_m = 0.0;
  double var_emp_m2 = 0.0;
  double crlb_m2 = 0.0;
  double ratio = 0.0;
  double mean_d_m = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Monte-Carlo estimator-variance study against the closed-form bound.
// One row per (gamma, d); per-trial seeds are derived from (seed, trial), so
// results are independent of worker scheduling.
inline std::vector<EfficiencyRow> crlb_efficiency_study(
    const Scenario& s, std::span<const double> d_list_m, std::span<const double> gamma_db_list,
    int trials, std::uint64_t seed, int n_threads = 1,
    PilotAllocation alloc = PilotAllocation::contiguous) {
  if (trials < 500) throw std::invalid_argument("crlb_efficiency_study: need >= 500 trials");
  std::vector<EfficiencyRow> rows;
  std::uint64_t config_index = 0;
  for (double gdb : gamma_db_list) {
    for (double d : d_list_m) {
      const double gamma = db_to_linear(gdb);
      std::vector<double> d_hat(trials);
      const std::uint64_t config_seed = derive_seed(seed, 1000003ULL * config_index);
      detail::parallel_for(static_cast<std::size_t>(trials), n_threads, [&](std::size_t t) {
        const auto frame = gen_echo(s, d, gamma, derive_seed(config_seed, t), alloc);
        d_hat[t] = ml_delay_estimate(frame).d_m;
      });
      double mean = 0.0;
      for (double v : d_hat) mean += v;
      mean /= trials;
      double var = 0.0;
      for (double v : d_hat) var += (v - mean) * (v - mean);
      var /= (trials - 1);

      EfficiencyRow r;
      r.gamma_db = gdb;
      r.d_m = d;
      r.var_emp_m2 = var;
      r.crlb_m2 = crlb_exact_m2(gamma, s.delta_f_hz, s.n_symbols, s.sensing_subcarriers());
      r.ratio = var / r.crlb_m2;
      r.mean_d_m = mean;
      r.trials = trials;
      r.seed = seed;
      rows.push_back(r);
      ++config_index;
    }
  }
  return rows;
}

}  // namespace lawnsim
