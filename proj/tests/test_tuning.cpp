#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace repgraph;

namespace {

TheoryInputs inputs(int n, int T, int p) {
  TheoryInputs inp;
  inp.n = n;
  inp.T = T;
  inp.p = p;
  return inp;
}

PenaltyConfig cfg3(double lambda, double beta, double gamma) {
  PenaltyConfig cfg;
  cfg.lambda = lambda;
  cfg.beta = beta;
  cfg.gamma = gamma;
  return cfg;
}

}  // namespace

TEST_CASE("reference example lands on the small-T branch with the expected value") {
  const auto out = theory_defaults(inputs(50, 20, 100));
  CHECK_FALSE(out.large_T_branch);
  // c4 = {4 log 20 / pi^2}^{1/4}; c4^2 * 50 > 20
  const double c4 = std::pow(4.0 * std::log(20.0) / (std::numbers::pi * std::numbers::pi), 0.25);
  CHECK(out.c4 == doctest::Approx(c4).epsilon(1e-12));
  CHECK(c4 * c4 * 50.0 > 20.0);
  const double lambda = 2.0 * std::log(20.0) * std::log(50.0 * 20.0 * 100.0) / std::sqrt(20.0);
  CHECK(out.config.lambda == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(out.config.beta == out.config.lambda);
  CHECK(out.config.lambda == doctest::Approx(15.4243).epsilon(1e-4));
  const double gamma = std::sqrt(std::log(20.0) / 19.0) / (50.0 * std::sqrt(20.0));
  CHECK(out.config.gamma == doctest::Approx(gamma).epsilon(1e-12));
  CHECK(out.i0 == 19);
}

TEST_CASE("large replicate counts select the other branch") {
  const auto out = theory_defaults(inputs(2, 1000, 10));
  CHECK(out.large_T_branch);
  const double logT = std::log(1000.0);
  const double lambda = 2.0 * logT * std::log(2.0 * 1000.0 * 10.0) * std::pow(2.0, -1.0 / 6.0) *
                        std::pow(1000.0, -1.0 / 3.0);
  CHECK(out.config.lambda == doctest::Approx(lambda).epsilon(1e-12));
  const double c4 = std::pow(4.0 * logT / (std::numbers::pi * std::numbers::pi), 0.25);
  const double denom = std::max(1.0, std::floor(std::pow(c4, 4.0 / 3.0) * std::pow(1000.0, 1.0 / 3.0) *
                                                std::pow(2.0, 2.0 / 3.0)));
  const double gamma = std::sqrt(logT / denom) / (2.0 * std::sqrt(1000.0));
  CHECK(out.config.gamma == doctest::Approx(gamma).epsilon(1e-12));
  const long i0 = static_cast<long>(std::floor(std::pow(c4 * std::pow(1000.0, 0.25) * std::sqrt(2.0), 4.0 / 3.0)));
  CHECK(out.i0 == std::max(1L, i0));
}

TEST_CASE("no-confounder variant") {
  const auto out = theory_defaults(inputs(50, 20, 100), true);
  const double lambda =
      2.0 * std::log(20.0) * std::log(50.0 * 20.0 * 100.0) / std::sqrt(50.0 * 20.0);
  CHECK(out.config.lambda == doctest::Approx(lambda).epsilon(1e-12));
  const double gamma =
      std::sqrt(std::log(20.0) / std::floor(std::log(20.0))) / (50.0 * std::sqrt(20.0));
  CHECK(out.config.gamma == doctest::Approx(gamma).epsilon(1e-12));
}

TEST_CASE("pinned gamma mode uses the closed-form constant") {
  const auto out = theory_defaults(inputs(50, 20, 100));
  const double big_d = 8.0 * std::sqrt(20.0 * std::log(20.0) / (std::numbers::pi * std::numbers::pi * 19.0));
  CHECK(out.gamma_pinned == doctest::Approx(2.0 * big_d / (50.0 * 20.0)).epsilon(1e-12));
}

TEST_CASE("lambda decreases in T once past the log-dominated start") {
  // 2 log(T) log(nTp) / sqrt(T) rises until 1/log T + 1/log(nTp) < 1/2
  // (T ~ 12 at n=50, p=100), then falls; check the falling range
  double prev = theory_defaults(inputs(50, 12, 100)).config.lambda;
  for (int T = 13; T <= 60; ++T) {
    const double next = theory_defaults(inputs(50, T, 100)).config.lambda;
    CHECK(next < prev);
    prev = next;
  }
  prev = theory_defaults(inputs(2, 500, 10)).config.lambda;
  for (int T = 600; T <= 1500; T += 100) {
    const auto out = theory_defaults(inputs(2, T, 10));
    REQUIRE(out.large_T_branch);
    CHECK(out.config.lambda < prev);
    prev = out.config.lambda;
  }
}

TEST_CASE("scale constants multiply gamma linearly") {
  TheoryInputs inp = inputs(30, 12, 20);
  inp.sigma_m = 2.0;
  inp.c1_const = 3.0;
  const auto scaled = theory_defaults(inp);
  const auto base = theory_defaults(inputs(30, 12, 20));
  CHECK(scaled.config.gamma == doctest::Approx(6.0 * base.config.gamma).epsilon(1e-12));
}

TEST_CASE("es_select with a single config selects it") {
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 77);
  EsOptions options;
  options.seed = 3;
  const auto result = es_select(d, {cfg3(0.1, 0.05, 0.5)}, options);
  CHECK(result.selected == 0);
  CHECK(result.es.size() == 1);
  CHECK(result.es_j[0].size() == 3);
  for (double v : result.es_j[0]) CHECK(v >= 0.0);
}

TEST_CASE("a config with identical fits across folds wins") {
  // huge penalties leave only per-subject means: those differ per fold only
  // through the recentering shift, so ES is tiny but the comparison against a
  // wildly varying config still resolves; instead pin the invariant that the
  // selected config attains the minimum ES
  const auto d = oracle::random_gaussian_dataset(10, 5, 4, 501);
  EsOptions options;
  options.seed = 9;
  const std::vector<PenaltyConfig> grid{cfg3(1e6, 1e6, 1e6), cfg3(0.01, 0.01, 0.1),
                                        cfg3(0.05, 0.02, 0.5)};
  const auto result = es_select(d, grid, options);
  double best = result.es[0];
  for (double v : result.es) best = std::min(best, v);
  CHECK(result.es[static_cast<std::size_t>(result.selected)] == best);
}

TEST_CASE("fold assignment partitions the subjects") {
  const auto d = oracle::random_gaussian_dataset(11, 4, 3, 41);
  EsOptions options;
  options.seed = 5;
  const auto result = es_select(d, {cfg3(0.1, 0.1, 0.5)}, options);
  std::vector<int> seen(11, 0);
  for (const auto& part : result.held_out) {
    CHECK_FALSE(part.empty());
    for (int s : part) ++seen[static_cast<std::size_t>(s)];
  }
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("es values recompute from the stored per-fold predictors") {
  // combined-scenario instance at the documented size
  PrecisionSpec spec;
  spec.p = 10;
  SimTruth truth = gen_partitioned(spec, 2, 313);
  TransitionSpec a_spec;
  a_spec.kind = TransitionSpec::Kind::sparse;
  a_spec.seed = 314;
  truth.A = gen_transition(a_spec, 10);
  LatentSpec latent;
  latent.q = 2;
  latent.regime = LatentRegime::piecewise;
  const auto d = center_dataset(gen_gaussian(20, 10, std::move(truth), latent, 315).data);
  EsOptions options;
  options.seed = 11;
  options.keep_eta = true;
  options.fit.threads = 2;
  const std::vector<PenaltyConfig> grid{cfg3(0.05, 0.02, 0.5), cfg3(0.2, 0.1, 1.0)};
  const auto result = es_select(d, grid, options);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double es_sum = 0.0;
    for (int j = 0; j < d.p; ++j) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d.rows());
      for (int f = 0; f < 5; ++f) mean += result.eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)];
      mean /= 5.0;
      double spread = 0.0;
      for (int f = 0; f < 5; ++f)
        spread +=
            (result.eta[g][static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] - mean).squaredNorm();
      spread /= 5.0;
      es_sum += spread / mean.squaredNorm();
    }
    CHECK(result.es[g] == doctest::Approx(es_sum / d.p).epsilon(1e-10));
  }
}

TEST_CASE("es is invariant to grid order") {
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 19);
  EsOptions options;
  options.seed = 21;
  const std::vector<PenaltyConfig> forward{cfg3(0.05, 0.02, 0.5), cfg3(0.2, 0.1, 1.0)};
  const std::vector<PenaltyConfig> backward{forward[1], forward[0]};
  const auto a = es_select(d, forward, options);
  const auto b = es_select(d, backward, options);
  CHECK(a.es[0] == doctest::Approx(b.es[1]).epsilon(1e-12));
  CHECK(a.es[1] == doctest::Approx(b.es[0]).epsilon(1e-12));
}

TEST_CASE("tie-break picks the smallest lambda then gamma") {
  // duplicate configs produce identical ES; the first by (lambda, gamma) wins
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 23);
  EsOptions options;
  options.seed = 31;
  const std::vector<PenaltyConfig> grid{cfg3(0.2, 0.05, 1.0), cfg3(0.2, 0.05, 0.5)};
  auto result = es_select(d, grid, options);
  if (result.es[0] == result.es[1]) CHECK(result.selected == 1);  // smaller gamma
}

TEST_CASE("training-only evaluation mode runs and stays nonnegative") {
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 29);
  EsOptions options;
  options.seed = 7;
  options.eval_on_training_only = true;
  const auto result = es_select(d, {cfg3(0.05, 0.02, 0.5), cfg3(0.3, 0.1, 1.0)}, options);
  for (const auto& per_node : result.es_j)
    for (double v : per_node) CHECK(v >= 0.0);
}

TEST_CASE("too few subjects for the folds is rejected") {
  const auto d = oracle::random_gaussian_dataset(3, 4, 3, 37);
  CHECK_THROWS_AS(es_select(d, {cfg3(0.1, 0.1, 0.1)}, {}), dimension_error);
}

TEST_CASE("empty grids are rejected") {
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 47);
  CHECK_THROWS_AS(es_select(d, {}, {}), value_error);
  const auto basis = FusedBasis::build(d.n, d.T);
  CHECK_THROWS_AS(edge_count_path(d, {}, SymmetrizeRule::intersection, basis), value_error);
}

TEST_CASE("es report json carries grid, selection, and folds") {
  const auto d = oracle::random_gaussian_dataset(10, 4, 3, 43);
  EsOptions options;
  options.seed = 13;
  const std::vector<PenaltyConfig> grid{cfg3(0.05, 0.02, 0.5), cfg3(0.2, 0.1, 1.0)};
  const auto result = es_select(d, grid, options);
  const auto report = es_report_to_json(grid, result);
  CHECK(report.at("grid").size() == 2);
  CHECK(report.at("held_out_subjects").size() == 5);
  CHECK(report.at("selected").get<int>() == result.selected);
  CHECK(report.at("grid")[0].contains("es_per_node"));
}
