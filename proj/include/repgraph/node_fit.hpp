#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace repgraph {

/// Per-node estimate from either solver. theta is ordered over the other
/// variables ascending (skipping the node itself); alpha spans all p lagged
/// variables; delta and h are the latent-effect vector and its working
/// coordinates, length nT, with delta == inverse-transform(h) by
/// construction. Node indices are 0-based in the API (file formats are
/// 1-based).
struct NodeFit {
  int j = 0;
  Eigen::VectorXd theta;  // p-1
  Eigen::VectorXd alpha;  // p (all zero when the lag block is dropped)
  Eigen::VectorXd delta;  // nT (all zero when the latent block is dropped)
  Eigen::VectorXd h;      // nT
  double intercept = 0.0;  // optional unpenalized scalar (Poisson only)
  int iterations = 0;
  double final_objective = 0.0;
  bool converged = false;

  // diagnostics
  double kkt = std::numeric_limits<double>::quiet_NaN();
  int min_rule_iterations = -1;  // first outer iteration where the min-of-blocks stop rule fires
  std::vector<double> objective_trace;

  /// theta coefficient toward variable k (k != j).
  double theta_for(int k) const { return theta[k < j ? k : k - 1]; }
};

}  // namespace repgraph
