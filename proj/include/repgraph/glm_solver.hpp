#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "repgraph/family.hpp"
#include "repgraph/gaussian_solver.hpp"

namespace repgraph {

/// Controls for the generalized-gradient-descent outer loop. L = 0 means
/// "use the family default". One block-coordinate cycle is run per quadratic
/// surrogate; each inner lasso is solved to full tolerance. intercept adds
/// an unpenalized per-node scalar (honored for Poisson only; the families'
/// node potentials otherwise absorb intercepts).
struct GgdSettings {
  double L = 0.0;
  double tol = 1e-8;
  int max_outer = 2000;
  double inner_tol = 1e-8;
  int inner_max_sweeps = 50000;
  bool intercept = false;
};

namespace detail {

inline void check_family(const ReplicateDataset& d, const NodeFamily& family) {
  if (family_name(d.family) != family.name)
    throw family_error("dataset family " + family_name(d.family) + " does not match node family " +
                       family.name);
}

inline void check_eta_cap(const Eigen::VectorXd& eta, const NodeFamily& family) {
  if (!std::isfinite(family.eta_cap)) return;
  const double worst = eta.cwiseAbs().maxCoeff();
  if (worst > family.eta_cap)
    throw divergence_error("linear predictor |eta| = " + std::to_string(worst) +
                           " exceeds the configured cap " + std::to_string(family.eta_cap) +
                           " for family " + family.name);
}

}  // namespace detail

/// Penalized negative log-likelihood (up to data-only terms):
/// (1/nT) sum [D(eta) - x eta] plus the three l1 penalties.
inline double objective_glm(const ReplicateDataset& d, int j, const NodeFamily& family,
                            const Eigen::VectorXd& theta, const Eigen::VectorXd& alpha,
                            const Eigen::VectorXd& h, const PenaltyConfig& cfg,
                            const FusedBasis& basis, double intercept = 0.0) {
  detail::check_node_inputs(d, j, cfg, basis);
  const NodeDesign design = build_node_design(d, j);
  Eigen::VectorXd eta = design.others * theta + design.lag * alpha + basis.from_h(h);
  eta.array() += intercept;
  double loss = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r)
    loss += family.log_partition(eta[r]) - design.y[r] * eta[r];
  const double nT = static_cast<double>(d.n) * d.T;
  return loss / nT + cfg.lambda * theta.lpNorm<1>() + cfg.beta * alpha.lpNorm<1>() +
         cfg.gamma * h.head(basis.diff_count()).lpNorm<1>();
}

/// Joint stationarity violation of the true (non-surrogate) problem, using
/// the exact conditional mean D'.
inline double glm_kkt_residual(const ReplicateDataset& d, int j, const NodeFamily& family,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& alpha,
                               const Eigen::VectorXd& h, const PenaltyConfig& cfg,
                               const FusedBasis& basis, double intercept = 0.0) {
  detail::check_node_inputs(d, j, cfg, basis);
  const NodeDesign design = build_node_design(d, j);
  Eigen::VectorXd eta = design.others * theta + design.lag * alpha + basis.from_h(h);
  eta.array() += intercept;
  // exponential-family score x - D'(eta); plays the role the residual has in
  // the squared-error case, so the same violation formulas apply
  Eigen::VectorXd score(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) score[r] = design.y[r] - family.mean(eta[r]);
  const double c = 1.0 / (static_cast<double>(d.n) * d.T);
  const auto violation = [](double g, double penalty, double b) {
    if (penalty < 0.0) return std::abs(g);
    if (b == 0.0) return std::max(0.0, std::abs(g) - penalty);
    return std::abs(g - penalty * (b > 0.0 ? 1.0 : -1.0));
  };
  double worst = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    worst = std::max(worst, violation(c * design.others.col(k).dot(score), cfg.lambda, theta[k]));
  if (!cfg.drop_alpha)
    for (Eigen::Index k = 0; k < alpha.size(); ++k)
      worst = std::max(worst, violation(c * design.lag.col(k).dot(score), cfg.beta, alpha[k]));
  if (!cfg.drop_delta) {
    const Eigen::VectorXd g_h = c * basis.from_h_adjoint(score);
    for (int m = 0; m < basis.diff_count(); ++m)
      worst = std::max(worst, violation(g_h[m], cfg.gamma, h[m]));
    for (int m = basis.diff_count(); m < basis.size(); ++m)
      worst = std::max(worst, violation(g_h[m], -1.0, h[m]));
  }
  return worst;
}

/// Generalized gradient descent with one block-coordinate cycle per
/// quadratic surrogate. Each block update majorizes the likelihood at the
/// freshest linear predictor (curvature L), so the true penalized negative
/// log-likelihood never increases; a fixed point satisfies the true
/// stationarity conditions.
inline NodeFit fit_node_glm(const ReplicateDataset& d, int j, const NodeFamily& family,
                            const PenaltyConfig& cfg, const FusedBasis& basis,
                            const GgdSettings& settings = {}, const NodeFit* warm = nullptr) {
  detail::check_family(d, family);
  detail::check_node_inputs(d, j, cfg, basis);
  const double L = settings.L > 0.0 ? settings.L : family.lipschitz_L;
  if (!(L > 0.0) || !std::isfinite(L)) throw value_error("majorization constant L must be finite and positive");

  const NodeDesign design = build_node_design(d, j);
  const Eigen::Index nT = d.rows();
  const bool use_theta = d.p > 1;
  const bool use_alpha = !cfg.drop_alpha;
  const bool use_h = !cfg.drop_delta;
  const bool use_intercept = settings.intercept && d.family == Family::poisson;

  NodeFit fit;
  fit.j = j;
  fit.theta = Eigen::VectorXd::Zero(d.p - 1);
  fit.alpha = Eigen::VectorXd::Zero(d.p);
  fit.h = Eigen::VectorXd::Zero(nT);
  if (warm) {
    if (use_theta && warm->theta.size() == d.p - 1) fit.theta = warm->theta;
    if (use_alpha && warm->alpha.size() == d.p) fit.alpha = warm->alpha;
    if (use_h && warm->h.size() == nT) fit.h = warm->h;
    fit.intercept = warm->intercept;
  }

  Eigen::VectorXd delta = use_h ? basis.from_h(fit.h) : Eigen::VectorXd::Zero(nT).eval();
  Eigen::VectorXd eta(nT), mean_at_eta(nT);
  const auto refresh_eta = [&] {
    eta = design.others * fit.theta + design.lag * fit.alpha + delta;
    eta.array() += fit.intercept;
    detail::check_eta_cap(eta, family);
    for (Eigen::Index r = 0; r < nT; ++r) mean_at_eta[r] = family.mean(eta[r]);
  };
  const auto record_objective = [&] {
    double loss = 0.0;
    for (Eigen::Index r = 0; r < nT; ++r) loss += family.log_partition(eta[r]) - design.y[r] * eta[r];
    const double value = loss / static_cast<double>(nT) + cfg.lambda * fit.theta.lpNorm<1>() +
                         cfg.beta * fit.alpha.lpNorm<1>() +
                         cfg.gamma * fit.h.head(basis.diff_count()).lpNorm<1>();
    fit.objective_trace.push_back(value);
    return value;
  };

  // Theta block optionally carries the unpenalized intercept column.
  Eigen::MatrixXd theta_design;
  Eigen::VectorXd theta_weights;
  if (use_theta || use_intercept) {
    const Eigen::Index cols = (d.p - 1) + (use_intercept ? 1 : 0);
    theta_design.resize(nT, cols);
    if (use_theta) theta_design.leftCols(d.p - 1) = design.others;
    if (use_intercept) theta_design.col(cols - 1).setOnes();
    theta_weights = Eigen::VectorXd::Ones(cols);
    if (use_intercept) theta_weights[cols - 1] = 0.0;
  }

  bool inner_ok = true;
  bool outer_converged = false;
  int iteration = 0;
  while (iteration < settings.max_outer) {
    ++iteration;
    double change_theta = 0.0, change_alpha = 0.0, change_h = 0.0;

    if (use_theta || use_intercept) {
      refresh_eta();
      PenalizedLSProblem prob;
      prob.design = theta_design;
      prob.response = design.y / L + theta_design.leftCols(d.p - 1) * fit.theta - mean_at_eta / L;
      if (use_intercept) prob.response.array() += fit.intercept;
      prob.scale = L;
      prob.penalty_level = cfg.lambda;
      prob.weights = theta_weights;
      Eigen::VectorXd warm_b(theta_design.cols());
      warm_b.head(d.p - 1) = fit.theta;
      if (use_intercept) warm_b[theta_design.cols() - 1] = fit.intercept;
      prob.warm_start = warm_b;
      const auto res = solve_penalized_ls(prob, settings.inner_tol, settings.inner_max_sweeps);
      change_theta = (res.coef.head(d.p - 1) - fit.theta).squaredNorm();
      fit.theta = res.coef.head(d.p - 1);
      if (use_intercept) {
        const double next = res.coef[theta_design.cols() - 1];
        change_theta += (next - fit.intercept) * (next - fit.intercept);
        fit.intercept = next;
      }
      inner_ok = inner_ok && res.converged;
    }
    if (use_alpha) {
      refresh_eta();
      PenalizedLSProblem prob;
      prob.design = design.lag;
      prob.response = design.y / L + design.lag * fit.alpha - mean_at_eta / L;
      prob.scale = L;
      prob.penalty_level = cfg.beta;
      prob.weights = Eigen::VectorXd::Ones(d.p);
      prob.warm_start = fit.alpha;
      const auto res = solve_penalized_ls(prob, settings.inner_tol, settings.inner_max_sweeps);
      change_alpha = (res.coef - fit.alpha).squaredNorm();
      fit.alpha = res.coef;
      inner_ok = inner_ok && res.converged;
    }
    if (use_h) {
      refresh_eta();
      const Eigen::VectorXd old_h = fit.h;
      const Eigen::VectorXd partial = design.y / L + delta - mean_at_eta / L;
      inner_ok = detail::update_h_block(basis, partial, cfg.gamma, L, fit.h, settings.inner_tol,
                                        settings.inner_max_sweeps) &&
                 inner_ok;
      change_h = (fit.h - old_h).squaredNorm();
      delta = basis.from_h(fit.h);
    }

    refresh_eta();
    record_objective();
    const double max_change = std::max({change_theta, change_alpha, change_h});
    double min_change = max_change;
    if (use_theta) min_change = std::min(min_change, change_theta);
    if (use_alpha) min_change = std::min(min_change, change_alpha);
    if (use_h) min_change = std::min(min_change, change_h);
    if (fit.min_rule_iterations < 0 && min_change <= settings.tol) fit.min_rule_iterations = iteration;
    if (max_change <= settings.tol) {
      outer_converged = true;
      break;
    }
  }

  fit.delta = use_h ? basis.from_h(fit.h) : Eigen::VectorXd::Zero(nT).eval();
  fit.iterations = iteration;
  fit.converged = outer_converged && inner_ok;
  if (fit.objective_trace.empty()) {
    refresh_eta();
    record_objective();
  }
  fit.final_objective = fit.objective_trace.back();
  fit.kkt = glm_kkt_residual(d, j, family, fit.theta, fit.alpha, fit.h, cfg, basis, fit.intercept);
  if (use_intercept) {
    refresh_eta();
    const double g0 = (mean_at_eta - design.y).sum() / static_cast<double>(nT);
    fit.kkt = std::max(fit.kkt, std::abs(g0));
  }
  return fit;
}

}  // namespace repgraph
