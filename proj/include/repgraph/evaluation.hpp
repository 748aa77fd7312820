#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "repgraph/graph.hpp"

namespace repgraph {

/// tpr = |est ∩ truth| / |truth|, fpr = |est \ truth| / (#non-edges).
/// Undefined denominators (empty truth for tpr, complete truth for fpr)
/// yield nullopt rather than a sentinel value.
struct EdgeScore {
  std::optional<double> tpr;
  std::optional<double> fpr;
};

inline EdgeScore tpr_fpr(const std::vector<std::pair<int, int>>& estimated,
                         const std::vector<std::pair<int, int>>& truth, int p) {
  if (p < 2) throw dimension_error("tpr_fpr needs p >= 2");
  const long total = static_cast<long>(p) * (p - 1) / 2;
  std::set<std::pair<int, int>> truth_set;
  for (auto [j, k] : truth) {
    if (j > k) std::swap(j, k);
    if (j < 0 || k >= p) throw dimension_error("truth edge out of range");
    truth_set.emplace(j, k);
  }
  long hits = 0, false_alarms = 0;
  std::set<std::pair<int, int>> seen;
  for (auto [j, k] : estimated) {
    if (j > k) std::swap(j, k);
    if (j < 0 || k >= p) throw dimension_error("estimated edge out of range");
    if (!seen.emplace(j, k).second) continue;
    if (truth_set.count({j, k}))
      ++hits;
    else
      ++false_alarms;
  }
  EdgeScore score;
  if (!truth_set.empty()) score.tpr = static_cast<double>(hits) / static_cast<double>(truth_set.size());
  const long non_edges = total - static_cast<long>(truth_set.size());
  if (non_edges > 0) score.fpr = static_cast<double>(false_alarms) / static_cast<double>(non_edges);
  return score;
}

inline EdgeScore tpr_fpr(const GraphEstimate& est, const std::vector<std::pair<int, int>>& truth,
                         int p) {
  if (est.p != p) throw dimension_error("graph estimate p does not match");
  return tpr_fpr(est.edges, truth, p);
}

/// Trapezoidal area under the ROC points, augmented with (0,0) and (1,1).
/// Duplicate fpr values keep the max tpr. Input order is irrelevant.
inline double roc_auc(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw value_error("roc_auc needs at least one (fpr, tpr) point");
  for (const auto& [fpr, tpr] : points)
    if (fpr < 0.0 || fpr > 1.0 || tpr < 0.0 || tpr > 1.0)
      throw value_error("roc points must lie in [0,1]^2");
  points.emplace_back(0.0, 0.0);
  points.emplace_back(1.0, 1.0);
  std::sort(points.begin(), points.end());
  std::vector<std::pair<double, double>> staircase;
  for (const auto& pt : points) {
    if (!staircase.empty() && staircase.back().first == pt.first)
      staircase.back().second = std::max(staircase.back().second, pt.second);
    else
      staircase.push_back(pt);
  }
  double area = 0.0;
  for (std::size_t i = 1; i < staircase.size(); ++i)
    area += 0.5 * (staircase[i].first - staircase[i - 1].first) *
            (staircase[i].second + staircase[i - 1].second);
  return area;
}

/// One ROC CSV row per grid point: lambda,beta,gamma,edges,tpr,fpr
/// (tpr/fpr cells are `nan` when undefined).
struct RocRow {
  PenaltyConfig config;
  int edges = 0;
  std::optional<double> tpr;
  std::optional<double> fpr;
};

inline void write_roc_csv(const std::vector<RocRow>& rows, const std::string& path) {
  auto out = open_output(path);
  out << "lambda,beta,gamma,edges,tpr,fpr\n";
  for (const auto& row : rows) {
    out << fmt_g17(row.config.lambda) << ',' << fmt_g17(row.config.beta) << ','
        << fmt_g17(row.config.gamma) << ',' << row.edges << ','
        << (row.tpr ? fmt_g17(*row.tpr) : "nan") << ',' << (row.fpr ? fmt_g17(*row.fpr) : "nan")
        << '\n';
  }
}

}  // namespace repgraph
