#pragma once

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "repgraph/fitting.hpp"
#include "repgraph/io.hpp"

namespace repgraph {

enum class SymmetrizeRule { intersection, union_rule };

inline std::string rule_name(SymmetrizeRule r) {
  return r == SymmetrizeRule::intersection ? "intersection" : "union";
}

inline SymmetrizeRule rule_from_string(const std::string& s) {
  if (s == "intersection") return SymmetrizeRule::intersection;
  if (s == "union") return SymmetrizeRule::union_rule;
  throw value_error("unknown symmetrization rule '" + s + "' (expected intersection|union)");
}

/// Symmetric edge set over p nodes with the coefficient pair behind each
/// edge. Edges are stored 0-based with j < k; file formats are 1-based.
struct GraphEstimate {
  int p = 0;
  SymmetrizeRule rule = SymmetrizeRule::intersection;
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, std::pair<double, double>> coefficients;  // (theta_jk, theta_kj)

  bool has_edge(int j, int k) const {
    if (j > k) std::swap(j, k);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(j, k));
  }
};

/// Combines the p asymmetric node fits into a symmetric graph. Under the
/// intersection rule an edge needs both theta_jk and theta_kj past zero_tol;
/// union needs either. Coordinate descent produces exact zeros, so the
/// default zero_tol = 0 is a strict nonzero test.
inline GraphEstimate symmetrize(const std::vector<NodeFit>& fits, SymmetrizeRule rule,
                                double zero_tol = 0.0) {
  const int p = static_cast<int>(fits.size());
  if (p == 0) throw dimension_error("symmetrize: no node fits");
  for (int j = 0; j < p; ++j) {
    if (fits[static_cast<std::size_t>(j)].j != j)
      throw dimension_error("symmetrize: fit for node " + std::to_string(j) + " missing or out of order");
    if (fits[static_cast<std::size_t>(j)].theta.size() != p - 1)
      throw dimension_error("symmetrize: fit " + std::to_string(j) + " has wrong theta length");
  }
  GraphEstimate graph;
  graph.p = p;
  graph.rule = rule;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      const double jk = fits[static_cast<std::size_t>(j)].theta_for(k);
      const double kj = fits[static_cast<std::size_t>(k)].theta_for(j);
      const bool jk_on = std::abs(jk) > zero_tol;
      const bool kj_on = std::abs(kj) > zero_tol;
      const bool edge = rule == SymmetrizeRule::intersection ? (jk_on && kj_on) : (jk_on || kj_on);
      if (edge) {
        graph.edges.emplace_back(j, k);
        graph.coefficients[{j, k}] = {jk, kj};
      }
    }
  return graph;
}

/// Edge counts along a penalty grid. With warm_start the fits are chained
/// along the grid order (sequential); otherwise grid points run
/// independently in parallel.
inline std::vector<std::pair<PenaltyConfig, int>> edge_count_path(
    const ReplicateDataset& d, const std::vector<PenaltyConfig>& grid, SymmetrizeRule rule,
    const FusedBasis& basis, const FitSettings& settings = {}, bool warm_start = true,
    double zero_tol = 0.0) {
  if (grid.empty()) throw value_error("edge_count_path: empty grid");
  std::vector<std::pair<PenaltyConfig, int>> counts(grid.size());
  if (warm_start) {
    std::vector<NodeFit> previous;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto fits =
          fit_all_nodes(d, grid[g], basis, settings, previous.empty() ? nullptr : &previous);
      counts[g] = {grid[g], static_cast<int>(symmetrize(fits, rule, zero_tol).edges.size())};
      previous = fits;
    }
  } else {
    parallel_for(static_cast<int>(grid.size()), settings.threads, [&](int g) {
      FitSettings serial = settings;
      serial.threads = 1;
      const auto fits = fit_all_nodes(d, grid[static_cast<std::size_t>(g)], basis, serial);
      counts[static_cast<std::size_t>(g)] = {
          grid[static_cast<std::size_t>(g)],
          static_cast<int>(symmetrize(fits, rule, zero_tol).edges.size())};
    });
  }
  return counts;
}

inline nlohmann::json graph_to_json(const GraphEstimate& g) {
  nlohmann::json out;
  out["p"] = g.p;
  out["rule"] = rule_name(g.rule);
  auto edges = nlohmann::json::array();
  auto coefficients = nlohmann::json::object();
  for (const auto& [j, k] : g.edges) {
    edges.push_back({j + 1, k + 1});
    const auto found = g.coefficients.find({j, k});
    if (found != g.coefficients.end())
      coefficients[std::to_string(j + 1) + "," + std::to_string(k + 1)] = {found->second.first,
                                                                           found->second.second};
  }
  out["edges"] = edges;
  out["coefficients"] = coefficients;
  return out;
}

inline GraphEstimate graph_from_json(const nlohmann::json& in) {
  GraphEstimate g;
  g.p = in.at("p").get<int>();
  g.rule = rule_from_string(in.at("rule").get<std::string>());
  for (const auto& e : in.at("edges")) {
    const int j = e.at(0).get<int>() - 1;
    const int k = e.at(1).get<int>() - 1;
    if (j < 0 || k <= j || k >= g.p) throw value_error("graph JSON edge out of range");
    g.edges.emplace_back(j, k);
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (in.contains("coefficients"))
    for (const auto& [key, value] : in.at("coefficients").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) throw value_error("graph JSON coefficient key '" + key + "'");
      const int j = static_cast<int>(parse_long(key.substr(0, comma), "graph JSON")) - 1;
      const int k = static_cast<int>(parse_long(key.substr(comma + 1), "graph JSON")) - 1;
      g.coefficients[{j, k}] = {value.at(0).get<double>(), value.at(1).get<double>()};
    }
  return g;
}

inline void write_graph_json(const GraphEstimate& g, const std::string& path) {
  auto out = open_output(path);
  out << graph_to_json(g).dump(2) << '\n';
}

inline GraphEstimate read_graph_json(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  in >> j;
  return graph_from_json(j);
}

}  // namespace repgraph
