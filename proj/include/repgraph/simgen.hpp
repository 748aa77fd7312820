#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "repgraph/dataset.hpp"
#include "repgraph/io.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

/// Random sparse symmetric precision matrix: a chosen fraction of
/// off-diagonal pairs set to `fill` (both triangles), diagonal raised to
/// |min eigenvalue of the off-diagonal part| + diag_boost, which guarantees
/// positive definiteness with smallest eigenvalue >= diag_boost.
struct PrecisionSpec {
  int p = 0;
  double density = 0.1;
  double fill = 0.3;
  double diag_boost = 0.1;
  std::uint64_t seed = 1;
};

enum class LatentRegime { none, constant, piecewise };

inline std::string regime_name(LatentRegime r) {
  switch (r) {
    case LatentRegime::none: return "none";
    case LatentRegime::constant: return "constant";
    case LatentRegime::piecewise: return "piecewise";
  }
  return "unknown";
}

/// Unmeasured-confounder layout: q confounders whose per-subject effect is
/// constant, or piecewise constant with one change after `changepoint`
/// (1-based last replicate of the first segment; 0 means floor(T/2)).
struct LatentSpec {
  int q = 0;
  LatentRegime regime = LatentRegime::none;
  int changepoint = 0;
};

struct TransitionSpec {
  enum class Kind { none, diagonal, sparse };
  Kind kind = Kind::none;
  double diag_value = 0.9;
  double sparse_density = 0.05;
  double sparse_value = 0.3;
  std::uint64_t seed = 1;
};

/// Ground truth behind a simulated dataset: the observed-block precision
/// (whose off-diagonal pattern is the true graph), the latent cross block,
/// the covariance partitions used by the generators, the transition matrix,
/// and the realized confounder paths.
struct SimTruth {
  int p = 0;
  int q = 0;
  Eigen::MatrixXd theta_xx;  // p x p, diagonal included
  Eigen::MatrixXd theta_xu;  // p x q
  Eigen::MatrixXd sigma_xx;  // p x p
  Eigen::MatrixXd sigma_xu;  // p x q
  Eigen::MatrixXd sigma_uu;  // q x q
  Eigen::MatrixXd A;         // p x p transition
  std::vector<Eigen::MatrixXd> U;  // per subject, T x q realized confounders
  std::string warning;

  std::vector<std::pair<int, int>> true_edges() const {
    std::vector<std::pair<int, int>> edges;
    for (int j = 0; j < p; ++j)
      for (int k = j + 1; k < p; ++k)
        if (theta_xx(j, k) != 0.0) edges.emplace_back(j, k);
    return edges;
  }
};

struct PrecisionResult {
  Eigen::MatrixXd theta;
  Eigen::MatrixXd sigma;
  std::string warning;
};

struct SimResult {
  ReplicateDataset data;
  SimTruth truth;
};

namespace detail {

inline std::vector<std::pair<int, int>> all_pairs(int p) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) pairs.emplace_back(j, k);
  return pairs;
}

/// |min eigenvalue| of the matrix with its diagonal zeroed, then that plus
/// boost written onto the diagonal.
inline void set_boosted_diagonal(Eigen::MatrixXd& theta, double boost) {
  theta.diagonal().setZero();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(theta, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  theta.diagonal().setConstant(std::abs(lambda_min) + boost);
}

inline Eigen::MatrixXd pd_inverse(const Eigen::MatrixXd& m, const std::string& what) {
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw value_error(what + " is not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

inline int resolve_changepoint(const LatentSpec& latent, int T) {
  if (latent.regime != LatentRegime::piecewise) return T;
  const int cp = latent.changepoint > 0 ? latent.changepoint : T / 2;
  if (cp <= 1 || cp >= T)
    throw value_error("piecewise regime needs 1 < changepoint < T, got " + std::to_string(cp) +
                      " with T = " + std::to_string(T));
  return cp;
}

}  // namespace detail

inline PrecisionResult gen_precision(const PrecisionSpec& spec) {
  if (spec.p < 2) throw dimension_error("gen_precision needs p >= 2");
  if (spec.density < 0.0 || spec.density > 1.0) throw value_error("density must be in [0, 1]");
  if (spec.diag_boost <= 0.0) throw value_error("diag_boost must be positive");
  Rng rng(spec.seed);
  const auto pairs = detail::all_pairs(spec.p);
  const int want = static_cast<int>(std::llround(spec.density * static_cast<double>(pairs.size())));
  PrecisionResult result;
  if (spec.density > 0.0 && want == 0)
    result.warning = "density " + std::to_string(spec.density) + " rounds to zero pairs";
  result.theta = Eigen::MatrixXd::Zero(spec.p, spec.p);
  for (const int idx : rng.sample_without_replacement(static_cast<int>(pairs.size()), want)) {
    const auto& [j, k] = pairs[static_cast<std::size_t>(idx)];
    result.theta(j, k) = result.theta(k, j) = spec.fill;
  }
  detail::set_boosted_diagonal(result.theta, spec.diag_boost);
  result.sigma = detail::pd_inverse(result.theta, "generated precision matrix");
  return result;
}

namespace detail {

/// Shared pattern for the partitioned constructions: chosen densities per
/// block (observed-observed pairs, observed-latent entries, latent-latent
/// pairs), a value drawn per selected pair, diagonal boosted by 0.2.
template <typename DrawValue>
inline SimTruth build_partitioned(int p, int q, double density_xx, double density_latent,
                                  double diag_boost, Rng& rng, DrawValue&& draw) {
  if (p < 2) throw dimension_error("partitioned precision needs p >= 2");
  if (q < 1) throw dimension_error("partitioned precision needs q >= 1");
  const int m = p + q;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(m, m);

  const auto xx_pairs = all_pairs(p);
  const int want_xx = static_cast<int>(std::llround(density_xx * static_cast<double>(xx_pairs.size())));
  for (const int idx : rng.sample_without_replacement(static_cast<int>(xx_pairs.size()), want_xx)) {
    const auto& [j, k] = xx_pairs[static_cast<std::size_t>(idx)];
    theta(j, k) = theta(k, j) = draw(rng);
  }
  const int want_xu = static_cast<int>(std::llround(density_latent * p * q));
  for (const int idx : rng.sample_without_replacement(p * q, want_xu)) {
    const int j = idx / q;
    const int u = p + idx % q;
    theta(j, u) = theta(u, j) = draw(rng);
  }
  const auto uu_pairs = all_pairs(q);
  const int want_uu =
      q >= 2 ? static_cast<int>(std::llround(density_latent * static_cast<double>(uu_pairs.size()))) : 0;
  for (const int idx : rng.sample_without_replacement(static_cast<int>(uu_pairs.size()), want_uu)) {
    const auto& [j, k] = uu_pairs[static_cast<std::size_t>(idx)];
    theta(p + j, p + k) = theta(p + k, p + j) = draw(rng);
  }

  set_boosted_diagonal(theta, diag_boost);
  const Eigen::MatrixXd sigma = pd_inverse(theta, "partitioned precision matrix");

  SimTruth truth;
  truth.p = p;
  truth.q = q;
  truth.theta_xx = theta.topLeftCorner(p, p);
  truth.theta_xu = theta.topRightCorner(p, q);
  truth.sigma_xx = sigma.topLeftCorner(p, p);
  truth.sigma_xu = sigma.topRightCorner(p, q);
  truth.sigma_uu = sigma.bottomRightCorner(q, q);
  truth.A = Eigen::MatrixXd::Zero(p, p);
  return truth;
}

}  // namespace detail

/// (p+q)-dimensional precision with spec_x.density on the observed block and
/// 80% density on the observed-latent and latent-latent blocks, diagonal
/// boost 0.2; covariance partitions extracted from the inverse.
inline SimTruth gen_partitioned(const PrecisionSpec& spec_x, int q, std::uint64_t seed) {
  Rng rng(seed);
  const double fill = spec_x.fill;
  return detail::build_partitioned(spec_x.p, q, spec_x.density, 0.8, 0.2, rng,
                                   [fill](Rng&) { return fill; });
}

/// Same pattern as gen_partitioned but nonzero values drawn uniformly from
/// [-0.5,-0.25] u [0.25,0.5] (sign and interval position equally likely).
inline SimTruth gen_ising_precision(int p, int q, std::uint64_t seed) {
  Rng rng(seed);
  return detail::build_partitioned(p, q, 0.1, 0.8, 0.2, rng, [](Rng& r) {
    const double sign = r.bernoulli(0.5) ? 1.0 : -1.0;
    return sign * r.uniform(0.25, 0.5);
  });
}

inline Eigen::MatrixXd gen_transition(const TransitionSpec& spec, int p) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  switch (spec.kind) {
    case TransitionSpec::Kind::none: break;
    case TransitionSpec::Kind::diagonal:
      A.diagonal().setConstant(spec.diag_value);
      break;
    case TransitionSpec::Kind::sparse: {
      // "5% of the elements": all p^2 entries count, A need not be symmetric
      Rng rng(spec.seed);
      const int want = static_cast<int>(std::llround(spec.sparse_density * p * p));
      for (const int idx : rng.sample_without_replacement(p * p, want))
        A(idx / p, idx % p) = spec.sparse_value;
      break;
    }
  }
  return A;
}

/// Gaussian generator covering every observed-variable scenario: one-lag
/// autoregression through truth.A, confounder effects through the
/// conditional mean map sigma_xu * sigma_uu^{-1}, conditional covariance
/// sigma_xx - sigma_xu sigma_uu^{-1} sigma_ux. The first replicate has no
/// lag term. All randomness comes from per-subject substreams of `seed`, so
/// output is bit-identical for any thread count.
inline SimResult gen_gaussian(int n, int T, SimTruth truth, const LatentSpec& latent,
                              std::uint64_t seed) {
  if (n < 1 || T < 1) throw dimension_error("gen_gaussian needs n >= 1, T >= 1");
  const int p = truth.p;
  if (truth.A.rows() != p || truth.A.cols() != p) throw dimension_error("transition matrix must be p x p");
  const bool use_latent = latent.regime != LatentRegime::none;
  if (use_latent && latent.q != truth.q)
    throw dimension_error("latent spec q = " + std::to_string(latent.q) +
                          " does not match truth q = " + std::to_string(truth.q));
  const int cp = detail::resolve_changepoint(latent, T);

  Eigen::MatrixXd cond_cov = truth.sigma_xx;
  Eigen::MatrixXd mean_map;  // p x q
  Eigen::LLT<Eigen::MatrixXd> chol_uu;
  if (use_latent) {
    const Eigen::MatrixXd uu_inv = detail::pd_inverse(truth.sigma_uu, "latent covariance block");
    mean_map = truth.sigma_xu * uu_inv;
    cond_cov -= mean_map * truth.sigma_xu.transpose();
    chol_uu.compute(truth.sigma_uu);
    if (chol_uu.info() != Eigen::Success) throw value_error("latent covariance block is not positive definite");
  }
  const Eigen::LLT<Eigen::MatrixXd> chol_cond(cond_cov);
  if (chol_cond.info() != Eigen::Success)
    throw value_error("conditional covariance is not positive definite");
  const Eigen::MatrixXd noise_factor = chol_cond.matrixL();
  const Eigen::MatrixXd uu_factor = use_latent ? Eigen::MatrixXd(chol_uu.matrixL()) : Eigen::MatrixXd();

  ReplicateDataset data;
  data.n = n;
  data.T = T;
  data.p = p;
  data.family = Family::gaussian;
  data.values.resize(static_cast<Eigen::Index>(n) * T, p);
  truth.U.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(T, truth.q));

  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
    Eigen::MatrixXd& u_path = truth.U[static_cast<std::size_t>(i)];
    if (use_latent) {
      const auto draw_u = [&] {
        Eigen::VectorXd z(truth.q);
        for (int m = 0; m < truth.q; ++m) z[m] = rng.normal();
        return (uu_factor * z).eval();
      };
      const Eigen::VectorXd u1 = draw_u();
      const Eigen::VectorXd u2 = latent.regime == LatentRegime::piecewise ? draw_u() : u1;
      for (int t = 0; t < T; ++t) u_path.row(t) = (t < cp ? u1 : u2).transpose();
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd z(p);
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd mean = t == 0 ? Eigen::VectorXd::Zero(p) : (truth.A * x).eval();
      if (use_latent) mean += mean_map * u_path.row(t).transpose();
      for (int m = 0; m < p; ++m) z[m] = rng.normal();
      x = mean + noise_factor * z;
      data.values.row(static_cast<Eigen::Index>(i) * T + t) = x.transpose();
    }
  }
  data.validate();
  return {std::move(data), std::move(truth)};
}

/// Gibbs-sampler controls. Defaults follow the reference protocol (1e4
/// burn-in sweeps, one collected sample every 1e3 sweeps). By default each
/// subject runs one chain: burn-in before the first replicate, `thin` sweeps
/// between consecutive replicates; per_replicate_burn_in = true instead runs
/// a full burn-in before every replicate.
struct GibbsSettings {
  long burn_in = 10000;
  long thin = 1000;
  bool per_replicate_burn_in = false;
};

/// Binary Ising sampler. Replicate 1 uses the no-lag conditional
///   P(x_j = 1 | rest) = sigmoid(theta_jj + sum_k theta_jk x_k + sum_m theta_xu_jm u_m),
/// replicates t >= 2 add the lag term sum_k A_jk x_{(t-1)k} with the
/// previous *collected* replicate. Sweeps are systematic over j = 1..p.
///
/// Per-subject draw order (fixed; tests replay it): latent normals first,
/// then p Bernoulli(1/2) for the initial state, then one uniform per site
/// visit.
inline SimResult gen_ising_gibbs(int n, int T, SimTruth truth, const LatentSpec& latent,
                                 const GibbsSettings& gibbs, std::uint64_t seed) {
  if (n < 1 || T < 1) throw dimension_error("gen_ising_gibbs needs n >= 1, T >= 1");
  if (gibbs.burn_in < 0 || gibbs.thin < 0) throw value_error("burn_in and thin must be nonnegative");
  const int p = truth.p;
  if (!truth.theta_xx.allFinite()) throw value_error("ising precision entries must be finite");
  const bool use_latent = latent.regime != LatentRegime::none;
  if (use_latent && latent.q != truth.q)
    throw dimension_error("latent spec q does not match truth q");
  const int cp = detail::resolve_changepoint(latent, T);

  Eigen::LLT<Eigen::MatrixXd> chol_uu;
  Eigen::MatrixXd uu_factor;
  if (use_latent) {
    chol_uu.compute(truth.sigma_uu);
    if (chol_uu.info() != Eigen::Success) throw value_error("latent covariance block is not positive definite");
    uu_factor = chol_uu.matrixL();
  }

  ReplicateDataset data;
  data.n = n;
  data.T = T;
  data.p = p;
  data.family = Family::ising;
  data.values.resize(static_cast<Eigen::Index>(n) * T, p);
  truth.U.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(T, truth.q));

  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
    Eigen::MatrixXd& u_path = truth.U[static_cast<std::size_t>(i)];
    if (use_latent) {
      const auto draw_u = [&] {
        Eigen::VectorXd z(truth.q);
        for (int m = 0; m < truth.q; ++m) z[m] = rng.normal();
        return (uu_factor * z).eval();
      };
      const Eigen::VectorXd u1 = draw_u();
      const Eigen::VectorXd u2 = latent.regime == LatentRegime::piecewise ? draw_u() : u1;
      for (int t = 0; t < T; ++t) u_path.row(t) = (t < cp ? u1 : u2).transpose();
    }

    Eigen::VectorXd state(p);
    for (int j = 0; j < p; ++j) state[j] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    Eigen::VectorXd lag = Eigen::VectorXd::Zero(p);

    const auto sweep = [&](bool with_lag, int t) {
      for (int j = 0; j < p; ++j) {
        double logit = truth.theta_xx(j, j);
        for (int k = 0; k < p; ++k)
          if (k != j) logit += truth.theta_xx(j, k) * state[k];
        if (use_latent)
          for (int m = 0; m < truth.q; ++m) logit += truth.theta_xu(j, m) * u_path(t, m);
        if (with_lag) logit += truth.A.row(j).dot(lag);
        const double prob = 1.0 / (1.0 + std::exp(-logit));
        state[j] = rng.uniform01() < prob ? 1.0 : 0.0;
      }
    };

    for (int t = 0; t < T; ++t) {
      const bool with_lag = t > 0;
      const long sweeps = (t == 0 || gibbs.per_replicate_burn_in) ? gibbs.burn_in : gibbs.thin;
      for (long s = 0; s < sweeps; ++s) sweep(with_lag, t);
      data.values.row(static_cast<Eigen::Index>(i) * T + t) = state.transpose();
      lag = state;
    }
  }
  data.validate();
  return {std::move(data), std::move(truth)};
}

/// `subject,time,u1..uq` CSV of the realized confounder paths.
inline void write_latent_csv(const SimTruth& truth, const std::string& path) {
  auto out = open_output(path);
  out << "subject,time";
  for (int m = 0; m < truth.q; ++m) out << ",u" << (m + 1);
  out << '\n';
  for (std::size_t i = 0; i < truth.U.size(); ++i)
    for (Eigen::Index t = 0; t < truth.U[i].rows(); ++t) {
      out << (i + 1) << ',' << (t + 1);
      for (int m = 0; m < truth.q; ++m) out << ',' << fmt_g17(truth.U[i](t, m));
      out << '\n';
    }
}

}  // namespace repgraph
