#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "oracles.hpp"

using namespace repgraph;

namespace {

using Edges = std::vector<std::pair<int, int>>;

/// Exhaustive pair-by-pair classification.
EdgeScore classify_all_pairs(const Edges& est, const Edges& truth, int p) {
  std::set<std::pair<int, int>> est_set(est.begin(), est.end());
  std::set<std::pair<int, int>> truth_set(truth.begin(), truth.end());
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      const bool in_est = est_set.count({j, k}) > 0;
      const bool in_truth = truth_set.count({j, k}) > 0;
      if (in_est && in_truth) ++tp;
      if (in_est && !in_truth) ++fp;
      if (!in_est && in_truth) ++fn;
      if (!in_est && !in_truth) ++tn;
    }
  EdgeScore score;
  if (tp + fn > 0) score.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (fp + tn > 0) score.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
  return score;
}

}  // namespace

TEST_CASE("hand-counted rates") {
  const Edges truth{{0, 1}, {1, 2}};
  const Edges est{{0, 1}, {0, 2}};
  const auto score = tpr_fpr(est, truth, 4);
  REQUIRE(score.tpr);
  REQUIRE(score.fpr);
  CHECK(*score.tpr == doctest::Approx(0.5));
  CHECK(*score.fpr == doctest::Approx(0.25));
}

TEST_CASE("perfect recovery and empty estimate") {
  const Edges truth{{0, 2}, {1, 3}, {2, 3}};
  const auto perfect = tpr_fpr(truth, truth, 4);
  CHECK(*perfect.tpr == 1.0);
  CHECK(*perfect.fpr == 0.0);
  const auto empty = tpr_fpr(Edges{}, truth, 4);
  CHECK(*empty.tpr == 0.0);
  CHECK(*empty.fpr == 0.0);
}

TEST_CASE("undefined denominators come back empty") {
  const auto no_truth = tpr_fpr(Edges{{0, 1}}, Edges{}, 3);
  CHECK_FALSE(no_truth.tpr);
  REQUIRE(no_truth.fpr);
  CHECK(*no_truth.fpr == doctest::Approx(1.0 / 3.0));

  Edges full;
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) full.emplace_back(j, k);
  const auto all_truth = tpr_fpr(Edges{{0, 1}}, full, 3);
  REQUIRE(all_truth.tpr);
  CHECK_FALSE(all_truth.fpr);
}

TEST_CASE("random instances agree with the exhaustive classifier") {
  Rng rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 3 + static_cast<int>(rng.uniform_below(6));
    Edges est, truth;
    for (int j = 0; j < p; ++j)
      for (int k = j + 1; k < p; ++k) {
        if (rng.bernoulli(0.3)) est.emplace_back(j, k);
        if (rng.bernoulli(0.3)) truth.emplace_back(j, k);
      }
    const auto a = tpr_fpr(est, truth, p);
    const auto b = classify_all_pairs(est, truth, p);
    CHECK(a.tpr.has_value() == b.tpr.has_value());
    CHECK(a.fpr.has_value() == b.fpr.has_value());
    if (a.tpr) CHECK(*a.tpr == doctest::Approx(*b.tpr).epsilon(1e-15));
    if (a.fpr) CHECK(*a.fpr == doctest::Approx(*b.fpr).epsilon(1e-15));
  }
}

TEST_CASE("auc of single points") {
  CHECK(roc_auc({{0.0, 1.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(roc_auc({{0.5, 0.5}}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("auc hand trapezoid") {
  const double auc = roc_auc({{0.2, 0.6}, {0.5, 0.9}});
  CHECK(auc == doctest::Approx(0.76).epsilon(1e-12));
}

TEST_CASE("auc ignores input order and stays within [0,1]") {
  const std::vector<std::pair<double, double>> forward{{0.1, 0.4}, {0.3, 0.7}, {0.8, 0.95}};
  std::vector<std::pair<double, double>> backward(forward.rbegin(), forward.rend());
  CHECK(roc_auc(forward) == doctest::Approx(roc_auc(backward)).epsilon(1e-15));
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, double>> points;
    const int count = 1 + static_cast<int>(rng.uniform_below(8));
    for (int i = 0; i < count; ++i) points.emplace_back(rng.uniform01(), rng.uniform01());
    const double auc = roc_auc(points);
    CHECK(auc >= 0.0);
    CHECK(auc <= 1.0);
  }
}

TEST_CASE("duplicate fpr keeps the max tpr") {
  const double auc = roc_auc({{0.5, 0.2}, {0.5, 0.8}});
  // staircase: (0,0) -> (0.5,0.8) -> (1,1)
  CHECK(auc == doctest::Approx(0.5 * 0.5 * 0.8 + 0.5 * 0.5 * 1.8).epsilon(1e-12));
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS_AS(roc_auc({}), value_error);
  CHECK_THROWS_AS(roc_auc({{1.2, 0.5}}), value_error);
  CHECK_THROWS_AS(tpr_fpr(Edges{{0, 5}}, Edges{}, 3), dimension_error);
}

TEST_CASE("roc csv format") {
  std::vector<RocRow> rows(2);
  rows[0].config.lambda = 0.5;
  rows[0].config.beta = 0.02;
  rows[0].config.gamma = 1.0;
  rows[0].edges = 3;
  rows[0].tpr = 0.75;
  rows[0].fpr = 0.125;
  rows[1].config.lambda = 0.25;
  rows[1].edges = 6;
  const auto path = (std::filesystem::temp_directory_path() / "repgraph_roc.csv").string();
  write_roc_csv(rows, path);
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda,beta,gamma,edges,tpr,fpr");
  std::getline(in, line);
  CHECK(line == "0.5,0.02,1,3,0.75,0.125");
  std::getline(in, line);
  CHECK(line == "0.25,0,0,6,nan,nan");
  std::remove(path.c_str());
}
