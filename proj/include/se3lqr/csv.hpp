// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT
//
// CSV emit/parse. All numbers are written with 17 significant digits so
// every emitted value round-trips to the same double.

#pragma once

#include <Eigen/Core>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "se3lqr/sim.hpp"
#include "se3lqr/tvlqr.hpp"
#include "se3lqr/types.hpp"

namespace se3lqr {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path + " for reading");
  return in;
}

inline std::vector<double> parse_row(const std::string& line,
                                     const std::string& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      row.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error(path + ": cannot parse '" + cell + "' as a number");
    }
  }
  return row;
}

}  // namespace detail

/// Headerless matrix block, one CSV row per matrix row.
inline void write_matrix_csv(const std::string& path,
                             const Eigen::MatrixXd& m) {
  std::ofstream out = detail::open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(detail::parse_row(line, path));
    if (rows.back().size() != rows.front().size()) {
      throw Error(path + ": ragged rows");
    }
  }
  if (rows.empty()) throw Error(path + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

/// Headered table: header row, then numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv_table(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.rows.push_back(detail::parse_row(line, path));
    if (table.rows.back().size() != table.header.size()) {
      throw Error(path + ": row width does not match header");
    }
  }
  return table;
}

/// Rollout rows: t, S(6), V(6), W_applied(6), err_norm.
inline void write_rollout_csv(const std::string& path, const Rollout& r) {
  std::ofstream out = detail::open_out(path);
  out << "t";
  for (int i = 0; i < 6; ++i) out << ",S" << i;
  for (int i = 0; i < 6; ++i) out << ",V" << i;
  for (int i = 0; i < 6; ++i) out << ",W" << i;
  out << ",err_norm\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out << format_double(r.times[k]);
    const Vec12 x = r.states[k].vec();
    for (int i = 0; i < 12; ++i) out << ',' << format_double(x(i));
    const Vec6 w = r.wrenches[k].vec();
    for (int i = 0; i < 6; ++i) out << ',' << format_double(w(i));
    out << ',' << format_double(r.error_norms.empty() ? 0.0 : r.error_norms[k]);
    out << '\n';
  }
}

/// Nominal trajectory in rollout format (err_norm column is zero).
inline void write_nominal_csv(const std::string& path,
                              const NominalTrajectory& traj) {
  Rollout r;
  r.times = traj.times;
  r.states = traj.states;
  r.wrenches = traj.wrenches;
  write_rollout_csv(path, r);
}

/// Gain schedule rows: t, 72 row-major K entries, 144 row-major S entries.
inline void write_gain_schedule_csv(const std::string& path,
                                    const GainSchedule& sched) {
  std::ofstream out = detail::open_out(path);
  out << "t";
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 12; ++j) out << ",K" << i << "_" << j;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) out << ",S" << i << "_" << j;
  out << '\n';
  for (std::size_t k = 0; k < sched.times.size(); ++k) {
    out << format_double(sched.times[k]);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 12; ++j)
        out << ',' << format_double(sched.k_mats[k](i, j));
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        out << ',' << format_double(sched.s_mats[k](i, j));
    out << '\n';
  }
}

inline GainSchedule read_gain_schedule_csv(const std::string& path) {
  const CsvTable table = read_csv_table(path);
  if (table.header.size() != 1 + 72 + 144) {
    throw Error(path + ": gain schedule must have 217 columns");
  }
  GainSchedule sched;
  for (const auto& row : table.rows) {
    sched.times.push_back(row[0]);
    Mat6x12 k_mat;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 12; ++j)
        k_mat(i, j) = row[1 + static_cast<std::size_t>(i * 12 + j)];
    Mat12 s_mat;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        s_mat(i, j) = row[73 + static_cast<std::size_t>(i * 12 + j)];
    sched.k_mats.push_back(k_mat);
    sched.s_mats.push_back(s_mat);
  }
  return sched;
}

}  // namespace se3lqr
