#pragma once

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawnsim/scenario.hpp"
#include "lawnsim/units.hpp"

namespace lawnsim {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw config_error("invalid numeric value for key '" + key + "': " + value);
  }
}

inline int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw config_error("invalid integer value for key '" + key + "': " + value);
  }
}

}  // namespace detail

// One settable scenario key: "section.key" plus how to apply it.
struct ConfigKey {
  std::string key;
  std::string description;
  std::function<void(Scenario&, const std::string&, const std::string&)> apply;
};

inline const std::vector<ConfigKey>& config_schema() {
  using detail::parse_double;
  using detail::parse_int;
  static const std::vector<ConfigKey> schema = {
      {"carrier.fc_hz", "carrier frequency, Hz",
       [](Scenario& s, const std::string& k, const std::string& v) { s.fc_hz = parse_double(k, v); }},
      {"carrier.bandwidth_hz", "total system bandwidth, Hz",
       [](Scenario& s, const std::string& k, const std::string& v) { s.bandwidth_hz = parse_double(k, v); }},
      {"carrier.p_sum_dbm", "total BS transmit power, dBm",
       [](Scenario& s, const std::string& k, const std::string& v) { s.p_sum_dbm = parse_double(k, v); }},
      {"carrier.noise_dbm", "noise power, dBm",
       [](Scenario& s, const std::string& k, const std::string& v) { s.noise_dbm = parse_double(k, v); }},
      {"array.nx", "UPA elements along x",
       [](Scenario& s, const std::string& k, const std::string& v) { s.nx = parse_int(k, v); }},
      {"array.ny", "UPA elements along y",
       [](Scenario& s, const std::string& k, const std::string& v) { s.ny = parse_int(k, v); }},
      {"geometry.bs_half_spacing_m", "half the BS separation, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.bs_half_spacing_m = parse_double(k, v); }},
      {"geometry.h_bs_m", "BS antenna height, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.h_bs_m = parse_double(k, v); }},
      {"ofdm.n_symbols", "OFDM symbols per frame",
       [](Scenario& s, const std::string& k, const std::string& v) { s.n_symbols = parse_int(k, v); }},
      {"ofdm.n_subcarriers", "subcarriers",
       [](Scenario& s, const std::string& k, const std::string& v) { s.n_subcarriers = parse_int(k, v); }},
      {"ofdm.delta_f_hz", "subcarrier spacing, Hz",
       [](Scenario& s, const std::string& k, const std::string& v) { s.delta_f_hz = parse_double(k, v); }},
      {"ofdm.t_cp_s", "cyclic prefix duration, s",
       [](Scenario& s, const std::string& k, const std::string& v) { s.t_cp_s = parse_double(k, v); }},
      {"sensing.pilot_ratio", "fraction of subcarriers used for sensing (0,1]",
       [](Scenario& s, const std::string& k, const std::string& v) { s.pilot_ratio = parse_double(k, v); }},
      {"sensing.rcs_m2", "drone radar cross section, m^2",
       [](Scenario& s, const std::string& k, const std::string& v) { s.rcs_m2 = parse_double(k, v); }},
      {"sensing.gamma_override_db", "fixed sensing SNR in dB, or 'none'",
       [](Scenario& s, const std::string& k, const std::string& v) {
         if (v == "none" || v.empty())
           s.gamma_override.reset();
         else
           s.gamma_override = db_to_linear(parse_double(k, v));
       }},
      {"handover.hysteresis_db", "RSRP A3 hysteresis, dB",
       [](Scenario& s, const std::string& k, const std::string& v) { s.hysteresis_db = parse_double(k, v); }},
      {"handover.d_th_m", "distance-criterion threshold, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.d_th_m = parse_double(k, v); }},
      {"shadow.coeff_a", "shadow model sigma = a*exp(-b*h), a coefficient, dB",
       [](Scenario& s, const std::string& k, const std::string& v) { s.sf_coeff_a = parse_double(k, v); }},
      {"shadow.coeff_b", "shadow model decay coefficient, 1/m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.sf_coeff_b = parse_double(k, v); }},
      {"grid.x_min_m", "evaluation grid x lower bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.x_min_m = parse_double(k, v); }},
      {"grid.x_max_m", "evaluation grid x upper bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.x_max_m = parse_double(k, v); }},
      {"grid.x_step_m", "evaluation grid x step, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.x_step_m = parse_double(k, v); }},
      {"grid.y_min_m", "evaluation grid y lower bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.y_min_m = parse_double(k, v); }},
      {"grid.y_max_m", "evaluation grid y upper bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.y_max_m = parse_double(k, v); }},
      {"grid.y_step_m", "evaluation grid y step, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.y_step_m = parse_double(k, v); }},
      {"grid.alt_min_m", "altitude sweep lower bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.alt_min_m = parse_double(k, v); }},
      {"grid.alt_max_m", "altitude sweep upper bound, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.alt_max_m = parse_double(k, v); }},
      {"grid.alt_step_m", "altitude sweep step, m",
       [](Scenario& s, const std::string& k, const std::string& v) { s.grid.alt_step_m = parse_double(k, v); }},
  };
  return schema;
}

inline const ConfigKey* find_config_key(const std::string& key) {
  for (const auto& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

// Parses the nested key-value format:
//   [section]
//   key = value        ; '#' and ';' start comments
// into "section.key" -> value entries, preserving file order.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(lineno) + ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key");
    entries.emplace_back(section.empty() ? key : section + "." + key, value);
  }
  return entries;
}

// Applies entries onto a scenario; unknown keys are an error naming the key.
inline void apply_config_entries(Scenario& s,
                                 const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) {
    const ConfigKey* ck = find_config_key(key);
    if (!ck) throw config_error("unknown scenario key '" + key + "'");
    ck->apply(s, key, value);
  }
}

// File -> scenario. An empty or missing-section file reproduces the defaults.
inline Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s;
  apply_config_entries(s, parse_config_text(buf.str()));
  return s;
}

// "section.key=value" strings from the command line; highest precedence.
inline std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw config_error("override must look like key=value, got '" + kv + "'");
    entries.emplace_back(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }
  return entries;
}

}  // namespace lawnsim
