#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lawnsim/config.hpp"
#include "lawnsim/csv.hpp"
#include "lawnsim/montecarlo.hpp"
#include "lawnsim/region.hpp"
#include "lawnsim/svg.hpp"
#include "lawnsim/waveform.hpp"

namespace lawnsim {

struct ExperimentSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string out_dir = ".";
  std::uint64_t seed = 555;
  int threads = 1;
  bool plots = false;
  double perturbation = 0.0;  // mc-validate fault-injection hook
};

struct ExperimentResult {
  std::vector<std::string> artifacts;
  bool validation_pass = true;  // false only for a failed mc-validate
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "fig2-probability-maps", "fig3-threshold-sweep", "fig4-pilot-sweep",
      "fig5-altitude-lengths", "fig6-snr-improvement", "fig7-rate-diff",
      "mc-validate",           "crlb-oracle"};
  return names;
}

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

inline void maybe_plot(const ExperimentSpec& spec, ExperimentResult& res,
                       const std::string& csv_path, PlotKind kind) {
  if (!spec.plots) return;
  std::string out = csv_path;
  const auto dot = out.find_last_of('.');
  out = (dot == std::string::npos ? out : out.substr(0, dot)) + ".svg";
  emit_plotdata(csv_path, kind, out);
  res.artifacts.push_back(out);
}

inline void run_fig2(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const double h = 200.0;
  const auto xs = s.grid.xs();
  const auto ys = s.grid.ys();
  for (Criterion c : {Criterion::rsrp, Criterion::dist, Criterion::joint}) {
    const std::string path =
        join_path(spec.out_dir, std::string("fig2_map_") + to_string(c) + ".csv");
    {
      CsvWriter w(path);
      w.provenance(s, spec.seed);
      w.header({"x_m", "y_m", "p_ho"});
      std::vector<std::vector<double>> vals(ys.size(), std::vector<double>(xs.size()));
      lawnsim::detail::parallel_for(ys.size(), spec.threads, [&](std::size_t yi) {
        for (std::size_t xi = 0; xi < xs.size(); ++xi)
          vals[yi][xi] = criterion_probability(s, c, xs[xi], ys[yi], h);
      });
      for (std::size_t yi = 0; yi < ys.size(); ++yi)
        for (std::size_t xi = 0; xi < xs.size(); ++xi)
          w.row(std::vector<double>{xs[xi], ys[yi], vals[yi][xi]});
    }
    res.artifacts.push_back(path);
    maybe_plot(spec, res, path, PlotKind::heatmap);
  }
  // region summary: unions over the plane plus the y = 0 row
  const std::string path = join_path(spec.out_dir, "fig2_regions.csv");
  CsvWriter w(path);
  w.provenance(s, spec.seed);
  w.header({"criterion", "union_x_lo_m", "union_x_hi_m", "y0_x_lo_m", "y0_x_hi_m", "y0_length_m"});
  for (Criterion c : {Criterion::rsrp, Criterion::dist, Criterion::joint}) {
    const auto u = plane_union_region(s, c, h, ys, spec.threads);
    const auto r0 = region_for(s, c, 0.0, h);
    w.row(std::vector<std::string>{to_string(c), fmt_num(u.x_lo_m), fmt_num(u.x_hi_m),
                                   fmt_num(r0.x_lo_m), fmt_num(r0.x_hi_m), fmt_num(r0.length_m)});
  }
  res.artifacts.push_back(path);
}

inline void run_fig3(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const std::string path = join_path(spec.out_dir, "fig3_thresholds.csv");
  CsvWriter w(path);
  w.provenance(s, spec.seed);
  w.header({"criterion", "param", "value", "x_lo_m", "x_hi_m", "length_m"});
  const double h = 200.0;
  for (double gam : {0.0, 0.5, 1.0, 2.0}) {
    Scenario v = s;
    v.hysteresis_db = gam;
    const auto r = region_for(v, Criterion::rsrp, 0.0, h);
    w.row(std::vector<std::string>{"rsrp", "hysteresis_db", fmt_num(gam), fmt_num(r.x_lo_m),
                                   fmt_num(r.x_hi_m), fmt_num(r.length_m)});
  }
  for (double dth : {0.0, 25.0, 50.0, 100.0}) {
    Scenario v = s;
    v.d_th_m = dth;
    const auto r = region_for(v, Criterion::joint, 0.0, h);
    w.row(std::vector<std::string>{"joint", "d_th_m", fmt_num(dth), fmt_num(r.x_lo_m),
                                   fmt_num(r.x_hi_m), fmt_num(r.length_m)});
  }
  res.artifacts.push_back(path);
}

inline void run_fig4(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const std::string path = join_path(spec.out_dir, "fig4_pilot.csv");
  {
    CsvWriter w(path);
    w.provenance(s, spec.seed);
    w.header({"rho", "L_rsrp_m", "L_dist_m", "L_joint_m"});
    const double h = 200.0;
    for (double rho : {0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20}) {
      Scenario v = s;
      v.pilot_ratio = rho;
      const auto rr = region_for(v, Criterion::rsrp, 0.0, h);
      const auto rd = region_for(v, Criterion::dist, 0.0, h);
      const auto rj = region_for(v, Criterion::joint, 0.0, h);
      w.row(std::vector<double>{rho, rr.length_m, rd.length_m, rj.length_m});
    }
  }
  res.artifacts.push_back(path);
  maybe_plot(spec, res, path, PlotKind::lines);
}

inline void run_fig5(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const std::string path = join_path(spec.out_dir, "fig5_altitude.csv");
  const auto ys = s.grid.ys();
  const auto alts = s.grid.altitudes();
  double sum_ratio = 0.0, sum_r = 0.0, sum_j = 0.0;
  {
    CsvWriter w(path);
    w.provenance(s, spec.seed);
    w.header({"h_m", "L_rsrp_m", "L_joint_m", "reduction"});
    for (double h : alts) {
      const double lr = avg_region_length(s, Criterion::rsrp, h, ys, spec.threads);
      const double lj = avg_region_length(s, Criterion::joint, h, ys, spec.threads);
      w.row(std::vector<double>{h, lr, lj, 1.0 - lj / lr});
      sum_ratio += 1.0 - lj / lr;
      sum_r += lr;
      sum_j += lj;
    }
  }
  res.artifacts.push_back(path);
  maybe_plot(spec, res, path, PlotKind::lines);

  const std::string spath = join_path(spec.out_dir, "fig5_summary.csv");
  CsvWriter sw(spath);
  sw.provenance(s, spec.seed);
  sw.header({"reduction_3d", "reduction_3d_grand_means"});
  sw.row(std::vector<double>{sum_ratio / alts.size(), 1.0 - sum_j / sum_r});
  res.artifacts.push_back(spath);
}

inline void run_fig6(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const std::string path = join_path(spec.out_dir, "fig6_improvement.csv");
  {
    CsvWriter w(path);
    w.provenance(s, spec.seed);
    w.header({"snr_db", "improvement_joint", "improvement_dist"});
    for (int snr_db = -30; snr_db <= 20; snr_db += 5) {
      const double go = db_to_linear(snr_db);
      const double ij = activation_improvement(s, Criterion::joint, Criterion::rsrp, go,
                                               ImprovementConvention::ratio_of_means, spec.threads);
      const double is = activation_improvement(s, Criterion::dist, Criterion::rsrp, go,
                                               ImprovementConvention::ratio_of_means, spec.threads);
      w.row(std::vector<double>{static_cast<double>(snr_db), ij, is});
    }
  }
  res.artifacts.push_back(path);
  maybe_plot(spec, res, path, PlotKind::lines);
}

inline void run_fig7(const Scenario& s, const ExperimentSpec& spec, ExperimentResult& res) {
  const auto m = rate_diff_map(s, 200.0, spec.threads);
  const std::string path = join_path(spec.out_dir, "fig7_rate_diff.csv");
  {
    CsvWriter w(path);
    w.provenance(s, spec.seed);
    w.header({"x_m", "y_m", "rate_diff_bps"});
    for (std::size_t yi = 0; yi < m.ys_m.size(); ++yi)
      for (std::size_t xi = 0; xi < m.xs_m.size(); ++xi)
        w.row(std::vector<double>{m.xs_m[xi], m.ys_m[yi], m.at(xi, yi)});
  }
  res.artifacts.push_back(path);
  maybe_plot(spec, res, path, PlotKind::heatmap);

  const std::string spath = join_path(spec.out_dir, "fig7_summary.csv");
  CsvWriter sw(spath);
  sw.provenance(s, spec.seed);
  sw.header({"max_diff_bps", "argmax_x_m", "argmax_y_m"});
  sw.row(std::vector<double>{m.max_diff_bps, m.argmax_x_m, m.argmax_y_m});
  res.artifacts.push_back(spath);
}

inline std::vector<DronePosition> default_mc_points() {
  std::vector<DronePosition> pts;
  for (double h : {160.0, 240.0})
    for (double y : {0.0, 400.0, 800.0})
      for (double x : {-150.0, -100.0, -50.0, -25.0, 0.0, 25.0, 50.0, 75.0, 100.0, 150.0})
        pts.push_back({x, y, h});
  return pts;
}

inline void run_mc_validate(const Scenario& s, const ExperimentSpec& spec,
                            ExperimentResult& res) {
  const auto pts = default_mc_points();
  const auto rep = validate_grid(s, pts, 100000, spec.seed, spec.threads, spec.perturbation);
  const std::string path = join_path(spec.out_dir, "mc_validation.csv");
  CsvWriter w(path);
  w.provenance(s, spec.seed);
  w.comment("pass_fraction=" + fmt_num(rep.pass_fraction));
  w.header({"x_m", "y_m", "h_m", "criterion", "p_analytic", "p_empirical", "ci_lo", "ci_hi",
            "pass"});
  for (const auto& r : rep.rows)
    w.row(std::vector<std::string>{fmt_num(r.point.x_m), fmt_num(r.point.y_m),
                                   fmt_num(r.point.h_m), r.criterion, fmt_num(r.p_analytic),
                                   fmt_num(r.p_empirical), fmt_num(r.ci_lo), fmt_num(r.ci_hi),
                                   r.pass ? "1" : "0"});
  res.artifacts.push_back(path);
  res.validation_pass = rep.pass;
}

inline void run_crlb_oracle(const Scenario& s, const ExperimentSpec& spec,
                            ExperimentResult& res) {
  const std::vector<double> d_list = {200.0, 500.0};
  const std::vector<double> gamma_db_list = {-20.0, -10.0, 0.0, 10.0, 20.0};
  const auto rows = crlb_efficiency_study(s, d_list, gamma_db_list, 2000, spec.seed, spec.threads);
  const std::string path = join_path(spec.out_dir, "crlb_oracle.csv");
  CsvWriter w(path);
  w.provenance(s, spec.seed);
  w.header({"gamma_db", "d_m", "var_emp_m2", "crlb_m2", "ratio", "trials", "seed"});
  for (const auto& r : rows)
    w.row(std::vector<std::string>{fmt_num(r.gamma_db), fmt_num(r.d_m), fmt_num(r.var_emp_m2),
                                   fmt_num(r.crlb_m2), fmt_num(r.ratio), std::to_string(r.trials),
                                   std::to_string(r.seed)});
  res.artifacts.push_back(path);
}

}  // namespace detail

struct unknown_experiment_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds the scenario (defaults -> config file -> overrides), validates it,
// and runs the named experiment. Every artifact is a deterministic function
// of (scenario, seed).
inline ExperimentResult run_experiment(const ExperimentSpec& spec,
                                       const std::optional<std::string>& config_path = {}) {
  Scenario s;
  if (config_path) s = scenario_from_file(*config_path);
  apply_config_entries(s, spec.overrides);
  const auto issues = validate(s);
  if (!issues.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& i : issues) msg += " [" + i.code + "] " + i.detail + ";";
    throw config_error(msg);
  }
  std::filesystem::create_directories(spec.out_dir);

  ExperimentResult res;
  if (spec.name == "fig2-probability-maps")
    detail::run_fig2(s, spec, res);
  else if (spec.name == "fig3-threshold-sweep")
    detail::run_fig3(s, spec, res);
  else if (spec.name == "fig4-pilot-sweep")
    detail::run_fig4(s, spec, res);
  else if (spec.name == "fig5-altitude-lengths")
    detail::run_fig5(s, spec, res);
  else if (spec.name == "fig6-snr-improvement")
    detail::run_fig6(s, spec, res);
  else if (spec.name == "fig7-rate-diff")
    detail::run_fig7(s, spec, res);
  else if (spec.name == "mc-validate")
    detail::run_mc_validate(s, spec, res);
  else if (spec.name == "crlb-oracle")
    detail::run_crlb_oracle(s, spec, res);
  else
    throw unknown_experiment_error("unknown experiment '" + spec.name + "'");
  return res;
}

}  // namespace lawnsim
