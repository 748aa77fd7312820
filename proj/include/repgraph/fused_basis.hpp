#pragma once

#include <Eigen/Dense>
#include <string>

#include "repgraph/types.hpp"

namespace repgraph {

/// Change of variables between the per-replicate latent effects Delta
/// (length nT, subject-major) and the working coordinates H in which the
/// fused penalty becomes a plain l1 penalty.
///
/// Per subject, M = [C; 1^T] stacks the (T-1)xT first-difference matrix C on
/// a row of ones; H collects all difference blocks first (subject-major,
/// n(T-1) coordinates), then the n within-subject sums, matching the row order of
/// the stacked transform ((I_n (x) C) rows, then summation rows). M is
/// square and invertible for every T >= 2, so the transform is a bijection;
/// M^{-1} is computed once at build time by an LU solve with partial
/// pivoting. Applying the pair blockwise needs O(nT*T) work instead of the
/// O((nT)^2) a materialized nT x nT matrix would cost.
struct FusedBasis {
  int n = 0;
  int T = 0;
  Eigen::MatrixXd C;     // (T-1) x T first differences
  Eigen::MatrixXd M;     // T x T, [C; ones^T]
  Eigen::MatrixXd Minv;  // M^{-1}

  static FusedBasis build(int n, int T) {
    if (n < 1) throw dimension_error("fused basis needs n >= 1");
    if (T < 2) throw dimension_error("fused basis needs T >= 2 (no differences exist for T < 2)");
    FusedBasis b;
    b.n = n;
    b.T = T;
    b.C = Eigen::MatrixXd::Zero(T - 1, T);
    for (int r = 0; r < T - 1; ++r) {
      b.C(r, r) = -1.0;
      b.C(r, r + 1) = 1.0;
    }
    b.M.resize(T, T);
    b.M.topRows(T - 1) = b.C;
    b.M.row(T - 1).setOnes();
    b.Minv = Eigen::PartialPivLU<Eigen::MatrixXd>(b.M).inverse();
    const double identity_err = (b.M * b.Minv - Eigen::MatrixXd::Identity(T, T)).cwiseAbs().maxCoeff();
    if (identity_err > 1e-12)
      throw value_error("fused basis inverse failed: |M*Minv - I| = " + std::to_string(identity_err));
    return b;
  }

  int size() const { return n * T; }
  int diff_count() const { return n * (T - 1); }

  /// Index of subject i's difference block start in H layout.
  int diff_offset(int subject) const { return subject * (T - 1); }
  /// Index of subject i's sum coordinate in H layout.
  int sum_index(int subject) const { return diff_count() + subject; }

  /// H = stacked-transform * Delta: per subject, consecutive differences,
  /// then the within-subject sum.
  Eigen::VectorXd to_h(const Eigen::VectorXd& delta) const {
    check_length(delta.size(), "to_h");
    Eigen::VectorXd h(size());
    for (int i = 0; i < n; ++i) {
      const auto block = delta.segment(static_cast<Eigen::Index>(i) * T, T);
      for (int t = 0; t < T - 1; ++t) h[diff_offset(i) + t] = block[t + 1] - block[t];
      h[sum_index(i)] = block.sum();
    }
    return h;
  }

  /// Delta = inverse-transform * H; exact inverse of to_h.
  Eigen::VectorXd from_h(const Eigen::VectorXd& h) const {
    check_length(h.size(), "from_h");
    Eigen::VectorXd delta(size());
    Eigen::VectorXd hi(T);
    for (int i = 0; i < n; ++i) {
      hi.head(T - 1) = h.segment(diff_offset(i), T - 1);
      hi[T - 1] = h[sum_index(i)];
      delta.segment(static_cast<Eigen::Index>(i) * T, T) = Minv * hi;
    }
    return delta;
  }

  /// Adjoint of from_h: maps a Delta-layout vector v to (inverse)^T v in H
  /// layout. Used for gradients of compositions through the inverse.
  Eigen::VectorXd from_h_adjoint(const Eigen::VectorXd& v) const {
    check_length(v.size(), "from_h_adjoint");
    Eigen::VectorXd g(size());
    Eigen::VectorXd ui(T);
    for (int i = 0; i < n; ++i) {
      ui = Minv.transpose() * v.segment(static_cast<Eigen::Index>(i) * T, T);
      g.segment(diff_offset(i), T - 1) = ui.head(T - 1);
      g[sum_index(i)] = ui[T - 1];
    }
    return g;
  }

 private:
  void check_length(Eigen::Index len, const std::string& op) const {
    if (len != size())
      throw dimension_error(op + ": vector length " + std::to_string(len) + " != nT = " +
                            std::to_string(size()));
  }
};

}  // namespace repgraph
