#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include "repgraph/fitting.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {

/// Inputs to the theory-guided reference tuning values: sample sizes plus
/// the scale constants of the error analysis (noise scale sigma_m, the
/// largest consecutive latent-effect jump plus one, the maximum knot count,
/// and the generic leading constant, default 1). All logarithms are natural.
struct TheoryInputs {
  int n = 0;
  int T = 0;
  int p = 0;
  double sigma_m = 1.0;
  double delta_max = 1.0;
  int tau_knots = 1;
  double c1_const = 1.0;

  void validate() const {
    if (n < 2 || T < 2 || p < 2) throw dimension_error("theory defaults need n, T, p >= 2");
    if (sigma_m <= 0.0 || delta_max <= 0.0 || tau_knots < 1 || c1_const <= 0.0)
      throw value_error("theory constants must be positive");
  }
};

/// Reference values plus which regime produced them. gamma_pinned is the
/// fully pinned appendix form 2 sigma_m D / (nT) with
/// D = 8 sqrt(T log T / (pi^2 i0)), offered as a second mode.
struct TheoryDefaults {
  PenaltyConfig config;   // lambda = beta, gamma
  bool large_T_branch = false;  // replicates dominate subjects (T > c4^2 n)
  double c4 = 0.0;
  long i0 = 0;
  double gamma_pinned = 0.0;
};

/// The two-regime tuning formulas, split on T vs c4^2 n with
/// c4 = {4 log(T) delta_max^2 tau^2 / pi^2}^{1/4}:
///   large-T:  lambda = beta = 2 log(T) log(nTp) n^{-1/6} T^{-1/3},
///             gamma  = c1 sigma_m sqrt(log T / max(1, floor(c4^{4/3} T^{1/3} n^{2/3}))) / (n sqrt T),
///             i0     = max(1, floor((c4 T^{1/4} n^{1/2})^{4/3}))
///   otherwise: lambda = beta = 2 log(T) log(nTp) T^{-1/2},
///             gamma  = c1 sigma_m sqrt(log T / (T-1)) / (n sqrt T),  i0 = T-1.
/// no_confounders switches to the adaptive no-latent form
///   lambda = beta = 2 log(T) log(nTp) (nT)^{-1/2},
///   gamma  = c1 sigma_m sqrt(log T / floor(log T)) / (n sqrt T),  i0 = floor(log T).
inline TheoryDefaults theory_defaults(const TheoryInputs& inp, bool no_confounders = false) {
  inp.validate();
  const double n = inp.n, T = inp.T;
  const double logT = std::log(T);
  const double log_ntp = std::log(n * T * static_cast<double>(inp.p));
  TheoryDefaults out;
  out.c4 = std::pow(4.0 * logT * inp.delta_max * inp.delta_max * inp.tau_knots * inp.tau_knots /
                        (std::numbers::pi * std::numbers::pi),
                    0.25);
  double gamma_denominator;
  if (no_confounders) {
    out.large_T_branch = false;
    out.config.lambda = 2.0 * logT * log_ntp / std::sqrt(n * T);
    out.i0 = std::max(1L, static_cast<long>(std::floor(logT)));
    gamma_denominator = std::floor(logT);
  } else if (T > out.c4 * out.c4 * n) {
    out.large_T_branch = true;
    out.config.lambda = 2.0 * logT * log_ntp * std::pow(n, -1.0 / 6.0) * std::pow(T, -1.0 / 3.0);
    gamma_denominator =
        std::max(1.0, std::floor(std::pow(out.c4, 4.0 / 3.0) * std::cbrt(T) * std::pow(n, 2.0 / 3.0)));
    out.i0 = std::max(
        1L, static_cast<long>(std::floor(std::pow(out.c4 * std::pow(T, 0.25) * std::sqrt(n), 4.0 / 3.0))));
  } else {
    out.large_T_branch = false;
    out.config.lambda = 2.0 * logT * log_ntp / std::sqrt(T);
    gamma_denominator = T - 1.0;
    out.i0 = inp.T - 1;
  }
  out.config.beta = out.config.lambda;
  out.config.gamma =
      inp.c1_const * inp.sigma_m * std::sqrt(logT / gamma_denominator) / (n * std::sqrt(T));
  const double big_d = 8.0 * std::sqrt(T * logT / (std::numbers::pi * std::numbers::pi *
                                                   static_cast<double>(out.i0)));
  out.gamma_pinned = 2.0 * inp.sigma_m * big_d / (n * T);
  return out;
}

/// Estimation-stability selection over a penalty grid: five 80%-of-subjects
/// refits per config, ES_j = mean squared deviation of the fitted linear
/// predictors around their mean, normalized by that mean's squared norm, and
/// the config minimizing mean_j ES_j wins (ties: smallest lambda, gamma,
/// beta).
struct EsOptions {
  int folds = 5;
  std::uint64_t seed = 1;
  /// Evaluate each fold's predictor on its own training subjects only
  /// (masked means) instead of on the full data with held-out latent blocks
  /// re-estimated.
  bool eval_on_training_only = false;
  bool keep_eta = false;
  FitSettings fit;
};

struct EsResult {
  std::vector<double> es;                  // per config
  std::vector<std::vector<double>> es_j;   // [config][node]
  int selected = -1;
  std::vector<std::vector<int>> held_out;  // [fold] -> subject indices left out
  /// Realized per-fold predictors, [config][fold][node], when keep_eta.
  std::vector<std::vector<std::vector<Eigen::VectorXd>>> eta;
};

namespace detail {

inline ReplicateDataset subset_subjects(const ReplicateDataset& d, const std::vector<int>& subjects,
                                        bool recenter) {
  ReplicateDataset out;
  out.n = static_cast<int>(subjects.size());
  out.T = d.T;
  out.p = d.p;
  out.family = d.family;
  out.centered = false;
  out.values.resize(static_cast<Eigen::Index>(out.n) * d.T, d.p);
  for (std::size_t s = 0; s < subjects.size(); ++s)
    out.values.middleRows(static_cast<Eigen::Index>(s) * d.T, d.T) =
        d.values.middleRows(static_cast<Eigen::Index>(subjects[s]) * d.T, d.T);
  // pooled centering is not subset-invariant, so training subsets recenter;
  // single-subject extractions for the latent refit keep the original values
  if (recenter && d.family == Family::gaussian && d.centered) out = center_dataset(out);
  return out;
}

}  // namespace detail

inline EsResult es_select(const ReplicateDataset& d, const std::vector<PenaltyConfig>& grid,
                          const EsOptions& options = {}) {
  if (grid.empty()) throw value_error("es_select: empty grid");
  if (options.folds < 2) throw value_error("es_select needs at least 2 folds");
  if (d.n < options.folds)
    throw dimension_error("es_select needs n >= folds (" + std::to_string(d.n) + " < " +
                          std::to_string(options.folds) + ")");
  const int folds = options.folds;
  const FusedBasis basis = FusedBasis::build(d.n, d.T);

  // subjects shuffled once, split into `folds` near-equal parts; training
  // set for fold f is everything except part f
  Rng rng(options.seed);
  const std::vector<int> order = rng.permutation(d.n);
  EsResult result;
  result.held_out.resize(static_cast<std::size_t>(folds));
  for (int s = 0; s < d.n; ++s)
    result.held_out[static_cast<std::size_t>(s % folds)].push_back(order[static_cast<std::size_t>(s)]);
  for (auto& part : result.held_out) std::sort(part.begin(), part.end());

  struct FoldJob {
    std::vector<int> training;
    ReplicateDataset data;
    FusedBasis basis;
    std::vector<bool> in_training;  // by subject
  };
  std::vector<FoldJob> jobs(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    auto& job = jobs[static_cast<std::size_t>(f)];
    job.in_training.assign(static_cast<std::size_t>(d.n), true);
    for (const int s : result.held_out[static_cast<std::size_t>(f)])
      job.in_training[static_cast<std::size_t>(s)] = false;
    for (int s = 0; s < d.n; ++s)
      if (job.in_training[static_cast<std::size_t>(s)]) job.training.push_back(s);
    job.data = detail::subset_subjects(d, job.training, true);
    job.basis = FusedBasis::build(job.data.n, d.T);
  }

  const std::size_t n_configs = grid.size();
  result.es.assign(n_configs, 0.0);
  result.es_j.assign(n_configs, std::vector<double>(static_cast<std::size_t>(d.p), 0.0));
  if (options.keep_eta)
    result.eta.assign(n_configs, std::vector<std::vector<Eigen::VectorXd>>(
                                     static_cast<std::size_t>(folds),
                                     std::vector<Eigen::VectorXd>(static_cast<std::size_t>(d.p))));

  // eta[fold][node], evaluated on the full data (default) or masked
  std::vector<std::vector<std::vector<Eigen::VectorXd>>> all_eta(
      n_configs, std::vector<std::vector<Eigen::VectorXd>>(static_cast<std::size_t>(folds),
                                                           std::vector<Eigen::VectorXd>(
                                                               static_cast<std::size_t>(d.p))));

  const int total_jobs = static_cast<int>(n_configs) * folds;
  parallel_for(total_jobs, options.fit.threads, [&](int idx) {
    const std::size_t g = static_cast<std::size_t>(idx) / static_cast<std::size_t>(folds);
    const int f = idx % folds;
    const FoldJob& job = jobs[static_cast<std::size_t>(f)];
    FitSettings serial = options.fit;
    serial.threads = 1;
    const auto fits = fit_all_nodes(job.data, grid[g], job.basis, serial);
    for (int j = 0; j < d.p; ++j) {
      const NodeDesign full_design = build_node_design(d, j);
      const NodeFit& fit = fits[static_cast<std::size_t>(j)];
      Eigen::VectorXd eta = full_design.others * fit.theta + full_design.lag * fit.alpha;
      // scatter the fitted latent blocks to their subjects; re-estimate the
      // held-out subjects' blocks with (theta, alpha) frozen
      for (std::size_t s = 0; s < job.training.size(); ++s)
        eta.segment(static_cast<Eigen::Index>(job.training[s]) * d.T, d.T) +=
            fit.delta.segment(static_cast<Eigen::Index>(s) * d.T, d.T);
      if (!options.eval_on_training_only && !grid[g].drop_delta) {
        for (const int s : result.held_out[static_cast<std::size_t>(f)]) {
          const std::vector<int> one{s};
          const ReplicateDataset sub = detail::subset_subjects(d, one, false);
          const FusedBasis sub_basis = FusedBasis::build(1, d.T);
          const Eigen::VectorXd delta = refit_delta_only(sub, j, fit.theta, fit.alpha, grid[g],
                                                         sub_basis, job.data.n, serial);
          eta.segment(static_cast<Eigen::Index>(s) * d.T, d.T) += delta;
        }
      }
      all_eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] = std::move(eta);
    }
  });

  for (std::size_t g = 0; g < n_configs; ++g) {
    double es_sum = 0.0;
    for (int j = 0; j < d.p; ++j) {
      double es_node;
      if (!options.eval_on_training_only) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d.rows());
        for (int f = 0; f < folds; ++f) mean += all_eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)];
        mean /= static_cast<double>(folds);
        const double mean_norm2 = mean.squaredNorm();
        double spread = 0.0;
        for (int f = 0; f < folds; ++f)
          spread += (all_eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] - mean).squaredNorm();
        spread /= static_cast<double>(folds);
        es_node = mean_norm2 > 0.0 ? spread / mean_norm2 : std::numeric_limits<double>::infinity();
      } else {
        // masked variant: coordinates of a subject only count in folds that
        // trained on it; per-coordinate means over those folds
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d.rows());
        Eigen::VectorXd hits = Eigen::VectorXd::Zero(d.rows());
        for (int f = 0; f < folds; ++f)
          for (int s = 0; s < d.n; ++s)
            if (jobs[static_cast<std::size_t>(f)].in_training[static_cast<std::size_t>(s)]) {
              mean.segment(static_cast<Eigen::Index>(s) * d.T, d.T) +=
                  all_eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)].segment(
                      static_cast<Eigen::Index>(s) * d.T, d.T);
              hits.segment(static_cast<Eigen::Index>(s) * d.T, d.T).array() += 1.0;
            }
        mean.array() /= hits.array().max(1.0);
        double spread = 0.0;
        double mean_norm2 = 0.0;
        for (int s = 0; s < d.n; ++s)
          mean_norm2 += mean.segment(static_cast<Eigen::Index>(s) * d.T, d.T).squaredNorm();
        for (int f = 0; f < folds; ++f)
          for (int s = 0; s < d.n; ++s)
            if (jobs[static_cast<std::size_t>(f)].in_training[static_cast<std::size_t>(s)])
              spread += (all_eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] - mean)
                            .segment(static_cast<Eigen::Index>(s) * d.T, d.T)
                            .squaredNorm();
        spread /= static_cast<double>(folds);
        es_node = mean_norm2 > 0.0 ? spread / mean_norm2 : std::numeric_limits<double>::infinity();
      }
      result.es_j[g][static_cast<std::size_t>(j)] = es_node;
      es_sum += es_node;
    }
    result.es[g] = es_sum / static_cast<double>(d.p);
  }
  if (options.keep_eta) result.eta = all_eta;

  const auto key = [&](std::size_t g) {
    return std::make_tuple(result.es[g], grid[g].lambda, grid[g].gamma, grid[g].beta);
  };
  std::size_t best = 0;
  for (std::size_t g = 1; g < n_configs; ++g)
    if (key(g) < key(best)) best = g;
  result.selected = static_cast<int>(best);
  return result;
}

inline nlohmann::json es_report_to_json(const std::vector<PenaltyConfig>& grid,
                                        const EsResult& result) {
  nlohmann::json report;
  auto grid_json = nlohmann::json::array();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    nlohmann::json entry;
    entry["lambda"] = grid[g].lambda;
    entry["beta"] = grid[g].beta;
    entry["gamma"] = grid[g].gamma;
    entry["drop_alpha"] = grid[g].drop_alpha;
    entry["drop_delta"] = grid[g].drop_delta;
    entry["es"] = result.es[g];
    entry["es_per_node"] = result.es_j[g];
    grid_json.push_back(entry);
  }
  report["grid"] = grid_json;
  report["selected"] = result.selected;
  nlohmann::json selected_config;
  selected_config["lambda"] = grid[static_cast<std::size_t>(result.selected)].lambda;
  selected_config["beta"] = grid[static_cast<std::size_t>(result.selected)].beta;
  selected_config["gamma"] = grid[static_cast<std::size_t>(result.selected)].gamma;
  report["selected_config"] = selected_config;
  auto folds_json = nlohmann::json::array();
  for (const auto& part : result.held_out) {
    auto ids = nlohmann::json::array();
    for (const int s : part) ids.push_back(s + 1);
    folds_json.push_back(ids);
  }
  report["held_out_subjects"] = folds_json;
  return report;
}

}  // namespace repgraph
