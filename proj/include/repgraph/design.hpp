#pragma once

#include <Eigen/Dense>

#include "repgraph/dataset.hpp"

namespace repgraph {

/// Stacked regression pieces for one node problem: the response x_j over all
/// subjects and replicates, the same-replicate values of the other p-1
/// variables (columns ascending, skipping j), and the lagged full
/// observation vectors (first replicate's lag row is zero).
struct NodeDesign {
  Eigen::VectorXd y;       // nT
  Eigen::MatrixXd others;  // nT x (p-1)
  Eigen::MatrixXd lag;     // nT x p
};

inline NodeDesign build_node_design(const ReplicateDataset& d, int j) {
  if (j < 0 || j >= d.p) throw dimension_error("node index out of range");
  NodeDesign design;
  design.y = d.values.col(j);
  design.others.resize(d.rows(), d.p - 1);
  int col = 0;
  for (int k = 0; k < d.p; ++k) {
    if (k == j) continue;
    design.others.col(col++) = d.values.col(k);
  }
  design.lag = Eigen::MatrixXd::Zero(d.rows(), d.p);
  for (int i = 0; i < d.n; ++i) {
    const Eigen::Index base = static_cast<Eigen::Index>(i) * d.T;
    for (int t = 1; t < d.T; ++t) design.lag.row(base + t) = d.values.row(base + t - 1);
  }
  return design;
}

}  // namespace repgraph
