#pragma once

#include <mutex>
#include <vector>

#include "repgraph/glm_solver.hpp"
#include "repgraph/parallel.hpp"

namespace repgraph {

/// Settings bundle covering both solver paths; the family decides which one
/// runs (Gaussian -> block coordinate descent, Ising/Poisson -> generalized
/// gradient descent).
struct FitSettings {
  BcdSettings bcd;
  GgdSettings ggd;
  double poisson_eta_cap = 6.0;
  int threads = 1;
};

inline NodeFamily family_for(Family f, double poisson_eta_cap = 6.0) {
  switch (f) {
    case Family::gaussian: return family_gaussian();
    case Family::ising: return family_ising();
    case Family::poisson: return family_poisson(poisson_eta_cap);
  }
  throw value_error("unknown family");
}

inline NodeFit fit_node(const ReplicateDataset& d, int j, const PenaltyConfig& cfg,
                        const FusedBasis& basis, const FitSettings& settings = {},
                        const NodeFit* warm = nullptr) {
  if (d.family == Family::gaussian)
    return fit_node_gaussian(d, j, cfg, basis, settings.bcd, warm);
  return fit_node_glm(d, j, family_for(d.family, settings.poisson_eta_cap), cfg, basis,
                      settings.ggd, warm);
}

/// Fits all p node problems; they are independent, so they run across
/// settings.threads workers with results stored by node index (identical
/// output for any thread count). Optional warm fits seed each node.
inline std::vector<NodeFit> fit_all_nodes(const ReplicateDataset& d, const PenaltyConfig& cfg,
                                          const FusedBasis& basis, const FitSettings& settings = {},
                                          const std::vector<NodeFit>* warm = nullptr) {
  std::vector<NodeFit> fits(static_cast<std::size_t>(d.p));
  parallel_for(d.p, settings.threads, [&](int j) {
    const NodeFit* w =
        warm && warm->size() == static_cast<std::size_t>(d.p) ? &(*warm)[static_cast<std::size_t>(j)] : nullptr;
    fits[static_cast<std::size_t>(j)] = fit_node(d, j, cfg, basis, settings, w);
  });
  return fits;
}

/// Re-estimates only the latent block of node j on dataset d with (theta,
/// alpha) frozen: the H-update of the solvers run to its own fixed point.
/// curvature_scale sets the quadratic weight so a subject here sees the same
/// per-subject subproblem it would inside a fit on n_reference subjects
/// (c = 1/(n_reference * T)); pass n_reference = d.n for a plain refit.
inline Eigen::VectorXd refit_delta_only(const ReplicateDataset& d, int j,
                                        const Eigen::VectorXd& theta, const Eigen::VectorXd& alpha,
                                        const PenaltyConfig& cfg, const FusedBasis& basis,
                                        int n_reference, const FitSettings& settings = {}) {
  if (cfg.drop_delta) return Eigen::VectorXd::Zero(basis.size());
  if (basis.n != d.n || basis.T != d.T)
    throw dimension_error("refit_delta_only: basis does not match dataset");
  const NodeDesign design = build_node_design(d, j);
  const double scale_ratio = static_cast<double>(d.n) / static_cast<double>(n_reference);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(basis.size());
  if (d.family == Family::gaussian) {
    // other blocks fixed: one exact block solve
    const Eigen::VectorXd partial = design.y - design.others * theta - design.lag * alpha;
    detail::update_h_block(basis, partial, cfg.gamma, scale_ratio, h, settings.bcd.inner_tol,
                           settings.bcd.inner_max_sweeps);
    return basis.from_h(h);
  }
  const NodeFamily family = family_for(d.family, settings.poisson_eta_cap);
  const double L = settings.ggd.L > 0.0 ? settings.ggd.L : family.lipschitz_L;
  const Eigen::VectorXd base_eta = design.others * theta + design.lag * alpha;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(basis.size());
  for (int it = 0; it < settings.ggd.max_outer; ++it) {
    Eigen::VectorXd eta = base_eta + delta;
    detail::check_eta_cap(eta, family);
    Eigen::VectorXd mean_at_eta(eta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) mean_at_eta[r] = family.mean(eta[r]);
    const Eigen::VectorXd partial = design.y / L + delta - mean_at_eta / L;
    const Eigen::VectorXd old_h = h;
    detail::update_h_block(basis, partial, cfg.gamma, L * scale_ratio, h, settings.ggd.inner_tol,
                           settings.ggd.inner_max_sweeps);
    delta = basis.from_h(h);
    if ((h - old_h).squaredNorm() <= settings.ggd.tol) break;
  }
  return delta;
}

}  // namespace repgraph
