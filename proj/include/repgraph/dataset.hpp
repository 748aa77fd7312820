#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "repgraph/io.hpp"
#include "repgraph/types.hpp"

namespace repgraph {

enum class Family { gaussian, ising, poisson };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::ising: return "ising";
    case Family::poisson: return "poisson";
  }
  return "unknown";
}

inline Family family_from_string(const std::string& s) {
  if (s == "gaussian") return Family::gaussian;
  if (s == "ising") return Family::ising;
  if (s == "poisson") return Family::poisson;
  throw value_error("unknown family '" + s + "' (expected gaussian|ising|poisson)");
}

/// n subjects x T replicates x p variables, stored subject-major then
/// time-minor: row i*T + t of `values` is subject i, replicate t. That
/// flattening matches the length-nT parameter vectors everywhere else.
///
/// Immutable by convention after validate(); all operations return copies.
struct ReplicateDataset {
  int n = 0;
  int T = 0;
  int p = 0;
  Family family = Family::gaussian;
  bool centered = false;
  Eigen::MatrixXd values;  // (n*T) x p

  double value(int subject, int replicate, int var) const {
    return values(static_cast<Eigen::Index>(subject) * T + replicate, var);
  }

  Eigen::Index rows() const { return static_cast<Eigen::Index>(n) * T; }

  /// Checks the rectangular shape and per-family value constraints.
  void validate() const {
    if (n < 1 || T < 1 || p < 1) throw dimension_error("dataset dimensions must be positive");
    if (values.rows() != rows() || values.cols() != p)
      throw dimension_error("dataset value matrix is " + std::to_string(values.rows()) + "x" +
                            std::to_string(values.cols()) + ", expected " + std::to_string(rows()) +
                            "x" + std::to_string(p));
    if (!values.allFinite()) throw value_error("dataset contains non-finite values");
    if (family == Family::ising) {
      for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (int j = 0; j < p; ++j)
          if (values(r, j) != 0.0 && values(r, j) != 1.0)
            throw value_error("ising dataset values must be 0 or 1");
    } else if (family == Family::poisson) {
      for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (int j = 0; j < p; ++j) {
          const double v = values(r, j);
          if (v < 0.0 || v != std::floor(v))
            throw value_error("poisson dataset values must be nonnegative integers");
        }
    }
    if (centered) {
      if (family != Family::gaussian) throw family_error("centered flag applies to gaussian data only");
      const Eigen::VectorXd means = values.colwise().mean();
      if (means.cwiseAbs().maxCoeff() >= 1e-10)
        throw value_error("centered dataset has pooled column mean >= 1e-10");
    }
  }
};

/// Subtracts the pooled per-variable mean (over all subjects and replicates).
inline ReplicateDataset center_dataset(const ReplicateDataset& d) {
  if (d.family != Family::gaussian)
    throw family_error("center_dataset requires a gaussian dataset, got " + family_name(d.family));
  ReplicateDataset out = d;
  const Eigen::RowVectorXd means = d.values.colwise().mean();
  out.values.rowwise() -= means;
  out.centered = true;
  return out;
}

/// T x p matrix whose row t holds subject i's full observation at replicate
/// t-1; the first row (the undefined lag of the first replicate) is zero.
inline Eigen::MatrixXd lag_design(const ReplicateDataset& d, int subject) {
  if (subject < 0 || subject >= d.n) throw dimension_error("lag_design: subject out of range");
  Eigen::MatrixXd lag = Eigen::MatrixXd::Zero(d.T, d.p);
  const Eigen::Index base = static_cast<Eigen::Index>(subject) * d.T;
  for (int t = 1; t < d.T; ++t) lag.row(t) = d.values.row(base + t - 1);
  return lag;
}

/// CSV with header `subject,time,v1,...,vp`, rows sorted by (subject, time),
/// both 1-based consecutive.
inline void write_dataset_csv(const ReplicateDataset& d, const std::string& path) {
  auto out = open_output(path);
  out << "subject,time";
  for (int j = 0; j < d.p; ++j) out << ",v" << (j + 1);
  out << '\n';
  for (int i = 0; i < d.n; ++i)
    for (int t = 0; t < d.T; ++t) {
      out << (i + 1) << ',' << (t + 1);
      for (int j = 0; j < d.p; ++j) out << ',' << fmt_g17(d.value(i, t, j));
      out << '\n';
    }
}

inline ReplicateDataset read_dataset_csv(const std::string& path, Family family) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw value_error("empty dataset CSV: " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "subject" || header[1] != "time")
    throw value_error("dataset CSV header must start with subject,time,v1,...: " + path);
  const int p = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < p; ++j)
    if (header[static_cast<std::size_t>(j) + 2] != "v" + std::to_string(j + 1))
      throw value_error("dataset CSV variable columns must be v1..vp: " + path);

  std::vector<std::vector<double>> rows;
  long expected_subject = 1, expected_time = 1;
  int T = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != p + 2)
      throw value_error("dataset CSV row has " + std::to_string(fields.size()) + " cells, expected " +
                        std::to_string(p + 2) + ": " + path);
    const long subject = parse_long(fields[0], path);
    const long time = parse_long(fields[1], path);
    if (subject == expected_subject + 1 && expected_time > 1) {
      if (T == 0)
        T = static_cast<int>(expected_time) - 1;
      else if (expected_time - 1 != T)
        throw value_error("unequal replicate counts per subject: " + path);
      expected_subject = subject;
      expected_time = 1;
    }
    if (subject != expected_subject || time != expected_time)
      throw value_error("dataset CSV rows must be consecutive 1-based (subject,time); saw (" +
                        std::to_string(subject) + "," + std::to_string(time) + ") expecting (" +
                        std::to_string(expected_subject) + "," + std::to_string(expected_time) + ")");
    std::vector<double> row(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) row[static_cast<std::size_t>(j)] = parse_double(fields[static_cast<std::size_t>(j) + 2], path);
    rows.push_back(std::move(row));
    ++expected_time;
  }
  if (rows.empty()) throw value_error("dataset CSV has no data rows: " + path);
  const int n = static_cast<int>(expected_subject);
  if (T == 0) T = static_cast<int>(expected_time) - 1;
  if (expected_time - 1 != T) throw value_error("last subject has short replicate block: " + path);

  ReplicateDataset d;
  d.n = n;
  d.T = T;
  d.p = p;
  d.family = family;
  d.values.resize(static_cast<Eigen::Index>(n) * T, p);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < p; ++j) d.values(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
  d.validate();
  return d;
}

}  // namespace repgraph
