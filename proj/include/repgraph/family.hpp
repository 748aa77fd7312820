#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace repgraph {

/// One exponential-family node-conditional: log-partition D, its derivative
/// (the conditional mean), and a curvature bound L with D''(eta) <= L on the
/// admissible range. eta_cap bounds the linear predictor where needed
/// (Poisson); +inf otherwise.
struct NodeFamily {
  std::string name;
  double (*log_partition)(double) = nullptr;
  double (*mean)(double) = nullptr;
  double lipschitz_L = 1.0;
  double eta_cap = std::numeric_limits<double>::infinity();

  double operator()(double eta) const { return log_partition(eta); }
};

namespace detail {

inline double gaussian_D(double eta) { return 0.5 * eta * eta + 0.5 * std::log(2.0 * std::numbers::pi); }
inline double gaussian_mean(double eta) { return eta; }

inline double ising_D(double eta) {
  // softplus, stable on both tails
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}
inline double ising_mean(double eta) {
  return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

inline double poisson_D(double eta) { return std::exp(eta); }
inline double poisson_mean(double eta) { return std::exp(eta); }

}  // namespace detail

inline NodeFamily family_gaussian() {
  return {"gaussian", detail::gaussian_D, detail::gaussian_mean, 1.0,
          std::numeric_limits<double>::infinity()};
}

/// L defaults to 1; the true curvature bound sup D'' is 1/4, and both are
/// admissible (L is a setting on the solver side).
inline NodeFamily family_ising() {
  return {"ising", detail::ising_D, detail::ising_mean, 1.0,
          std::numeric_limits<double>::infinity()};
}

/// D'' = exp(eta) is unbounded, so the linear predictor is capped and
/// L = exp(cap) majorizes on the admissible set. Iterates breaching the cap
/// raise divergence_error instead of being clamped.
inline NodeFamily family_poisson(double eta_cap = 6.0) {
  return {"poisson", detail::poisson_D, detail::poisson_mean, std::exp(eta_cap), eta_cap};
}

}  // namespace repgraph
