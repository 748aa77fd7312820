#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "repgraph/types.hpp"

namespace repgraph {

/// All numeric output uses 17 significant digits: enough to round-trip any
/// double bit-exactly, and fixed so identical runs produce identical bytes.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw value_error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw value_error("cannot open for reading: " + path);
  return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw value_error("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw value_error("cannot parse number '" + s + "' in " + context);
  }
}

inline long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw value_error("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw value_error("cannot parse integer '" + s + "' in " + context);
  }
}

/// Dense matrix CSV, header-free, one row per line.
inline void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << fmt_g17(m(i, j));
    }
    out << '\n';
  }
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw value_error("ragged matrix CSV: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw value_error("empty matrix CSV: " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

/// Edge-list CSV: header `j,k`, 1-based indices, j<k.
inline void write_edge_csv(const std::vector<std::pair<int, int>>& edges, const std::string& path) {
  auto out = open_output(path);
  out << "j,k\n";
  for (const auto& [j, k] : edges) out << (j + 1) << ',' << (k + 1) << '\n';
}

inline std::vector<std::pair<int, int>> read_edge_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw value_error("empty edge CSV: " + path);
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw value_error("edge CSV row needs 2 fields: " + path);
    const int j = static_cast<int>(parse_long(fields[0], path)) - 1;
    const int k = static_cast<int>(parse_long(fields[1], path)) - 1;
    if (j < 0 || k <= j) throw value_error("edge CSV expects 1-based j<k: " + path);
    edges.emplace_back(j, k);
  }
  return edges;
}

}  // namespace repgraph
