#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lawnsim/scenario.hpp"

namespace lawnsim {

inline constexpr const char* tool_version = "0.1.0";

// Deterministic number formatting so identical runs produce identical bytes.
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Stable content hash of the full parameter set, for CSV provenance lines.
inline std::uint64_t scenario_hash(const Scenario& s) {
  std::ostringstream os;
  os << fmt_num(s.fc_hz) << '|' << fmt_num(s.bandwidth_hz) << '|' << fmt_num(s.p_sum_dbm) << '|'
     << s.nx << '|' << s.ny << '|' << fmt_num(s.bs_half_spacing_m) << '|' << fmt_num(s.h_bs_m)
     << '|' << s.n_symbols << '|' << s.n_subcarriers << '|' << fmt_num(s.delta_f_hz) << '|'
     << fmt_num(s.t_cp_s) << '|' << fmt_num(s.pilot_ratio) << '|' << fmt_num(s.rcs_m2) << '|'
     << fmt_num(s.hysteresis_db) << '|' << fmt_num(s.d_th_m) << '|' << fmt_num(s.noise_dbm) << '|'
     << fmt_num(s.sf_coeff_a) << '|' << fmt_num(s.sf_coeff_b) << '|'
     << (s.gamma_override ? fmt_num(*s.gamma_override) : std::string("none")) << '|'
     << fmt_num(s.grid.x_min_m) << '|' << fmt_num(s.grid.x_max_m) << '|'
     << fmt_num(s.grid.x_step_m) << '|' << fmt_num(s.grid.y_min_m) << '|'
     << fmt_num(s.grid.y_max_m) << '|' << fmt_num(s.grid.y_step_m) << '|'
     << fmt_num(s.grid.alt_min_m) << '|' << fmt_num(s.grid.alt_max_m) << '|'
     << fmt_num(s.grid.alt_step_m);
  const std::string str = os.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : str) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void provenance(const Scenario& s, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(scenario_hash(s)));
    out_ << "# lawnsim " << tool_version << " scenario_hash=" << buf << " seed=" << seed << "\n";
  }

  void header(const std::vector<std::string>& cols) { write_row(cols); }

  void row(const std::vector<std::string>& cells) { write_row(cells); }

  void row(const std::vector<double>& cells) {
    std::vector<std::string> str;
    str.reserve(cells.size());
    for (double v : cells) str.push_back(fmt_num(v));
    write_row(str);
  }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\n";
  }
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    return -1;
  }
};

// Reads a CSV written by CsvWriter: comment lines skipped, first data line is
// the header. Non-numeric cells parse as NaN so mixed tables stay loadable.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.columns = cells;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace lawnsim
