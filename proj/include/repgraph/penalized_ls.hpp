#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "repgraph/types.hpp"

namespace repgraph {

/// Weighted, partially penalized lasso:
///
///   minimize over b   (c/2) ||y - X b||^2  +  penalty_level * sum_k weights_k |b_k|
///
/// with c = scale / N (N = rows of X). weights_k in {0,1} marks which
/// coordinates are penalized; unpenalized coordinates are solved exactly by
/// the same coordinate updates with a zero threshold.
struct PenalizedLSProblem {
  Eigen::MatrixXd design;    // N x K
  Eigen::VectorXd response;  // N
  double scale = 1.0;        // c = scale / N
  double penalty_level = 0.0;
  Eigen::VectorXd weights;   // K, entries in {0,1}
  std::optional<Eigen::VectorXd> warm_start;

  void validate() const {
    const auto N = design.rows();
    const auto K = design.cols();
    if (N < 1 || K < 1) throw dimension_error("penalized LS needs N >= 1, K >= 1");
    if (response.size() != N) throw dimension_error("penalized LS: response length != design rows");
    if (weights.size() != K) throw dimension_error("penalized LS: weights length != design cols");
    for (Eigen::Index k = 0; k < K; ++k)
      if (weights[k] != 0.0 && weights[k] != 1.0)
        throw value_error("penalized LS weights must be 0 or 1");
    if (scale <= 0.0) throw value_error("penalized LS scale must be positive");
    if (penalty_level < 0.0) throw value_error("penalized LS penalty must be nonnegative");
    if (warm_start && warm_start->size() != K)
      throw dimension_error("penalized LS: warm start length != design cols");
  }
};

struct PenalizedLSResult {
  Eigen::VectorXd coef;
  int sweeps = 0;
  bool converged = false;
};

inline double soft_threshold(double z, double t) {
  const double mag = std::abs(z) - t;
  // boundary ties resolve to zero
  return mag > 0.0 ? (z > 0.0 ? mag : -mag) : 0.0;
}

/// Maximum coordinatewise violation of the stationarity conditions at b:
/// with g_k = c x_k^T (y - X b),
///   penalized, b_k = 0:   max(0, |g_k| - penalty)
///   penalized, b_k != 0:  |g_k - penalty * sign(b_k)|
///   unpenalized:          |g_k|
inline double kkt_residual(const PenalizedLSProblem& prob, const Eigen::VectorXd& b) {
  prob.validate();
  if (b.size() != prob.design.cols()) throw dimension_error("kkt_residual: coefficient length mismatch");
  const double c = prob.scale / static_cast<double>(prob.design.rows());
  const Eigen::VectorXd residual = prob.response - prob.design * b;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < prob.design.cols(); ++k) {
    const double g = c * prob.design.col(k).dot(residual);
    double violation;
    if (prob.weights[k] == 0.0)
      violation = std::abs(g);
    else if (b[k] == 0.0)
      violation = std::max(0.0, std::abs(g) - prob.penalty_level);
    else
      violation = std::abs(g - prob.penalty_level * (b[k] > 0.0 ? 1.0 : -1.0));
    worst = std::max(worst, violation);
  }
  return worst;
}

inline double penalized_ls_objective(const PenalizedLSProblem& prob, const Eigen::VectorXd& b) {
  const double c = prob.scale / static_cast<double>(prob.design.rows());
  double pen = 0.0;
  for (Eigen::Index k = 0; k < b.size(); ++k) pen += prob.weights[k] * std::abs(b[k]);
  return 0.5 * c * (prob.response - prob.design * b).squaredNorm() + prob.penalty_level * pen;
}

/// Cyclic coordinate descent with active-set sweeps: a full pass, then passes
/// over the nonzero set until stable, then a full confirmation pass.
/// Converged when the largest coordinate change in a full pass is < tol.
/// If objective_trace is given, the objective after every pass is appended.
inline PenalizedLSResult solve_penalized_ls(const PenalizedLSProblem& prob, double tol = 1e-7,
                                            int max_sweeps = 100000,
                                            std::vector<double>* objective_trace = nullptr) {
  prob.validate();
  const auto N = prob.design.rows();
  const auto K = prob.design.cols();
  const double c = prob.scale / static_cast<double>(N);

  Eigen::VectorXd col_norm2(K);
  for (Eigen::Index k = 0; k < K; ++k) col_norm2[k] = prob.design.col(k).squaredNorm();

  Eigen::VectorXd b = prob.warm_start ? *prob.warm_start : Eigen::VectorXd::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (col_norm2[k] != 0.0) continue;
    if (prob.weights[k] == 0.0 && std::abs(c * prob.design.col(k).dot(prob.response)) > 0.0)
      throw degenerate_error("unpenalized zero-norm design column with nonzero gradient");
    b[k] = 0.0;  // column contributes nothing; pin its coefficient
  }
  Eigen::VectorXd residual = prob.response - prob.design * b;

  // one coordinate minimization; returns |change|
  const auto update = [&](Eigen::Index k) -> double {
    if (col_norm2[k] == 0.0) return 0.0;
    const double old = b[k];
    const double partial = prob.design.col(k).dot(residual) + col_norm2[k] * old;
    const double threshold = prob.weights[k] * prob.penalty_level;
    const double next = soft_threshold(c * partial, threshold) / (c * col_norm2[k]);
    if (next != old) {
      b[k] = next;
      residual -= prob.design.col(k) * (next - old);
    }
    return std::abs(next - old);
  };

  PenalizedLSResult result;
  std::vector<Eigen::Index> active;
  active.reserve(static_cast<std::size_t>(K));
  int sweeps = 0;
  bool converged = false;
  while (sweeps < max_sweeps) {
    // passes over the current nonzero set until it is stable
    active.clear();
    for (Eigen::Index k = 0; k < K; ++k)
      if (b[k] != 0.0 || prob.weights[k] == 0.0) active.push_back(k);
    if (active.size() < static_cast<std::size_t>(K)) {
      while (sweeps < max_sweeps) {
        double change = 0.0;
        for (const auto k : active) change = std::max(change, update(k));
        ++sweeps;
        if (objective_trace) objective_trace->push_back(penalized_ls_objective(prob, b));
        if (change < tol) break;
      }
    }
    if (sweeps >= max_sweeps) break;
    // full pass; doubles as the confirmation sweep
    residual = prob.response - prob.design * b;  // refresh accumulated drift
    double change = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) change = std::max(change, update(k));
    ++sweeps;
    if (objective_trace) objective_trace->push_back(penalized_ls_objective(prob, b));
    if (change < tol) {
      converged = true;
      break;
    }
  }
  result.coef = std::move(b);
  result.sweeps = sweeps;
  result.converged = converged;
  return result;
}

}  // namespace repgraph
