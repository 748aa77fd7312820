// Command-line surface: simulate / fit / path / eval / tune. Every command
// is deterministic given its inputs and --seed, for any --threads value;
// numeric output is fixed at 17 significant digits.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <repgraph/repgraph.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace repgraph;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// Grids come as explicit comma lists ("0.01,0.02,0.1") or log-spaced
/// ranges ("log:0.01:1:15" = 15 points from 0.01 to 1, log-spaced).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  if (text.rfind("log:", 0) == 0) {
    std::string rest = text.substr(4);
    for (auto& c : rest)
      if (c == ':') c = ',';
    const auto fields = split_csv_line(rest);
    if (fields.size() != 3) throw value_error("log grid needs log:LO:HI:COUNT, got '" + text + "'");
    const double lo = parse_double(fields[0], "grid");
    const double hi = parse_double(fields[1], "grid");
    const long count = parse_long(fields[2], "grid");
    if (lo <= 0.0 || hi <= 0.0 || count < 1) throw value_error("log grid needs positive LO, HI, COUNT");
    if (count == 1) return {lo};
    for (long i = 0; i < count; ++i)
      values.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) /
                                                   static_cast<double>(count - 1)));
    return values;
  }
  for (const auto& f : split_csv_line(text)) values.push_back(parse_double(f, "grid"));
  if (values.empty()) throw value_error("empty grid '" + text + "'");
  return values;
}

json config_json(const PenaltyConfig& cfg) {
  json j;
  j["lambda"] = cfg.lambda;
  j["beta"] = cfg.beta;
  j["gamma"] = cfg.gamma;
  j["drop_alpha"] = cfg.drop_alpha;
  j["drop_delta"] = cfg.drop_delta;
  return j;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& resolved,
                    std::uint64_t seed) {
  json manifest;
  manifest["tool"] = "repgraph";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["seed"] = seed;
  manifest["config"] = resolved;
  auto out = open_output((dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

void write_coefficients_csv(const std::vector<NodeFit>& fits, const fs::path& path) {
  auto out = open_output(path.string());
  out << "node,block,target,value\n";
  const int p = static_cast<int>(fits.size());
  for (int j = 0; j < p; ++j) {
    const auto& fit = fits[static_cast<std::size_t>(j)];
    for (int k = 0; k < p; ++k) {
      if (k == j) continue;
      out << (j + 1) << ",theta," << (k + 1) << ',' << fmt_g17(fit.theta_for(k)) << '\n';
    }
    for (int k = 0; k < p; ++k)
      out << (j + 1) << ",alpha," << (k + 1) << ',' << fmt_g17(fit.alpha[k]) << '\n';
    if (fit.intercept != 0.0) out << (j + 1) << ",intercept,0," << fmt_g17(fit.intercept) << '\n';
  }
}

void write_delta_csv(const std::vector<NodeFit>& fits, int n, int T, const fs::path& path) {
  auto out = open_output(path.string());
  out << "node,subject,time,delta\n";
  for (std::size_t j = 0; j < fits.size(); ++j)
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < T; ++t)
        out << (j + 1) << ',' << (i + 1) << ',' << (t + 1) << ','
            << fmt_g17(fits[j].delta[static_cast<Eigen::Index>(i) * T + t]) << '\n';
}

struct ScenarioOutput {
  SimResult sim;
  std::string transition_kind;
  std::string regime;
};

ScenarioOutput run_scenario(const std::string& scenario, int n, int T, int p, int q,
                            double density, double fill, const GibbsSettings& gibbs,
                            std::uint64_t seed) {
  const std::uint64_t seed_theta = splitmix64(seed ^ 0x74686574ULL);
  const std::uint64_t seed_a = splitmix64(seed ^ 0x7472616eULL);
  const std::uint64_t seed_data = splitmix64(seed ^ 0x64617461ULL);
  ScenarioOutput out;

  const auto make_transition = [&](TransitionSpec::Kind kind) {
    TransitionSpec spec;
    spec.kind = kind;
    spec.seed = seed_a;
    out.transition_kind = kind == TransitionSpec::Kind::none      ? "none"
                          : kind == TransitionSpec::Kind::diagonal ? "diagonal"
                                                                   : "sparse";
    return spec;
  };
  const auto gaussian_flow = [&](TransitionSpec::Kind a_kind, LatentRegime regime) {
    LatentSpec latent;
    latent.regime = regime;
    out.regime = regime_name(regime);
    SimTruth truth;
    if (regime == LatentRegime::none) {
      PrecisionSpec spec{p, density, fill, 0.1, seed_theta};
      auto prec = gen_precision(spec);
      truth.p = p;
      truth.q = 0;
      truth.theta_xx = std::move(prec.theta);
      truth.sigma_xx = std::move(prec.sigma);
      truth.warning = prec.warning;
    } else {
      PrecisionSpec spec{p, density, fill, 0.2, seed_theta};
      truth = gen_partitioned(spec, q, seed_theta);
      latent.q = q;
    }
    truth.A = gen_transition(make_transition(a_kind), p);
    out.sim = gen_gaussian(n, T, std::move(truth), latent, seed_data);
  };

  if (scenario == "ar1-diagonal")
    gaussian_flow(TransitionSpec::Kind::diagonal, LatentRegime::none);
  else if (scenario == "ar1-sparse")
    gaussian_flow(TransitionSpec::Kind::sparse, LatentRegime::none);
  else if (scenario == "latent-constant")
    gaussian_flow(TransitionSpec::Kind::none, LatentRegime::constant);
  else if (scenario == "latent-piecewise")
    gaussian_flow(TransitionSpec::Kind::none, LatentRegime::piecewise);
  else if (scenario == "combined-constant")
    gaussian_flow(TransitionSpec::Kind::sparse, LatentRegime::constant);
  else if (scenario == "combined-piecewise")
    gaussian_flow(TransitionSpec::Kind::sparse, LatentRegime::piecewise);
  else if (scenario == "ising") {
    SimTruth truth = gen_ising_precision(p, q, seed_theta);
    truth.A = gen_transition(make_transition(TransitionSpec::Kind::diagonal), p);
    LatentSpec latent;
    latent.q = q;
    latent.regime = LatentRegime::piecewise;
    out.regime = regime_name(latent.regime);
    out.sim = gen_ising_gibbs(n, T, std::move(truth), latent, gibbs, seed_data);
  } else {
    throw value_error("unknown scenario '" + scenario +
                      "' (expected ar1-diagonal|ar1-sparse|latent-constant|latent-piecewise|"
                      "combined-constant|combined-piecewise|ising)");
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Graph estimation for replicated data with lagged correlation and latent effects"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("repgraph ") + kVersion);

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a benchmark scenario dataset");
  std::string sim_scenario, sim_out = ".";
  int sim_n = 50, sim_T = 20, sim_p = 100, sim_q = 5;
  double sim_density = 0.1, sim_fill = 0.3;
  std::uint64_t sim_seed = 1;
  GibbsSettings gibbs;
  sim_cmd->add_option("--scenario", sim_scenario, "Scenario name")->required();
  sim_cmd->add_option("--n", sim_n, "Subjects");
  sim_cmd->add_option("--T", sim_T, "Replicates per subject");
  sim_cmd->add_option("--p", sim_p, "Observed variables");
  sim_cmd->add_option("--q", sim_q, "Confounders (latent scenarios)");
  sim_cmd->add_option("--density", sim_density, "Off-diagonal pair density of the observed block");
  sim_cmd->add_option("--fill", sim_fill, "Nonzero precision value (gaussian scenarios)");
  sim_cmd->add_option("--burn-in", gibbs.burn_in, "Gibbs burn-in sweeps (ising)");
  sim_cmd->add_option("--thin", gibbs.thin, "Gibbs sweeps between replicates (ising)");
  sim_cmd->add_flag("--per-replicate-burn-in", gibbs.per_replicate_burn_in,
                    "Full burn-in before every replicate (ising)");
  sim_cmd->add_option("--seed", sim_seed, "Seed");
  sim_cmd->add_option("--out-dir", sim_out, "Output directory");

  // ---- shared fit options ----
  const auto add_fit_options = [](CLI::App* cmd, std::string& dataset, std::string& family,
                                  PenaltyConfig& cfg, std::string& rule, int& threads,
                                  std::string& out_dir, FitSettings& settings) {
    cmd->add_option("--dataset", dataset, "Dataset CSV")->required();
    cmd->add_option("--family", family, "gaussian|ising|poisson")->required();
    cmd->add_option("--lambda", cfg.lambda, "Graph penalty");
    cmd->add_option("--beta", cfg.beta, "Lag penalty");
    cmd->add_option("--gamma", cfg.gamma, "Fused latent penalty");
    cmd->add_flag("--drop-alpha", cfg.drop_alpha, "Exclude the lag block");
    cmd->add_flag("--drop-delta", cfg.drop_delta, "Exclude the latent block");
    cmd->add_option("--rule", rule, "intersection|union");
    cmd->add_option("--threads", threads, "Worker threads (default: all cores)");
    cmd->add_option("--out-dir", out_dir, "Output directory");
    cmd->add_option("--tol", settings.bcd.tol, "Outer stop threshold (max block squared change)");
    cmd->add_option("--max-outer", settings.bcd.max_outer, "Outer iteration cap");
    cmd->add_option("--inner-tol", settings.bcd.inner_tol, "Coordinate-descent stop threshold");
    cmd->add_option("--inner-max-sweeps", settings.bcd.inner_max_sweeps,
                    "Coordinate-descent sweep cap per block update");
    cmd->add_option("--eta-cap", settings.poisson_eta_cap, "Poisson linear-predictor cap");
  };

  // ---- fit ----
  auto* fit_cmd = app.add_subcommand("fit", "Fit all node problems and assemble a graph");
  std::string fit_dataset, fit_family, fit_rule = "intersection", fit_out = ".";
  PenaltyConfig fit_cfg;
  FitSettings fit_settings;
  int fit_threads = static_cast<int>(std::thread::hardware_concurrency());
  bool fit_theory = false, fit_no_confounders = false, fit_intercept = false;
  TheoryInputs theory;
  add_fit_options(fit_cmd, fit_dataset, fit_family, fit_cfg, fit_rule, fit_threads, fit_out,
                  fit_settings);
  fit_cmd->add_flag("--theory-defaults", fit_theory, "Use the theory-guided reference penalties");
  bool fit_gamma_pinned = false;
  fit_cmd->add_flag("--theory-gamma-pinned", fit_gamma_pinned,
                    "With --theory-defaults, use the fully pinned closed-form gamma");
  fit_cmd->add_flag("--no-confounders", fit_no_confounders,
                    "Theory defaults for the no-latent regime");
  fit_cmd->add_option("--sigma-m", theory.sigma_m, "Noise scale constant");
  fit_cmd->add_option("--delta-max", theory.delta_max, "Max consecutive latent jump + 1");
  fit_cmd->add_option("--tau", theory.tau_knots, "Max latent knot count");
  fit_cmd->add_option("--c1-const", theory.c1_const, "Generic leading constant");
  fit_cmd->add_flag("--intercept", fit_intercept, "Unpenalized per-node intercept (poisson)");
  double fit_zero_tol = 0.0;
  fit_cmd->add_option("--zero-tol", fit_zero_tol, "Coefficient magnitude treated as zero");

  // ---- path ----
  auto* path_cmd = app.add_subcommand("path", "Fit a lambda path and emit ROC data");
  std::string path_dataset, path_family, path_rule = "intersection", path_out = ".", path_truth;
  std::string path_grid_lambda;
  PenaltyConfig path_cfg;
  FitSettings path_settings;
  int path_threads = static_cast<int>(std::thread::hardware_concurrency());
  bool path_no_warm = false;
  add_fit_options(path_cmd, path_dataset, path_family, path_cfg, path_rule, path_threads, path_out,
                  path_settings);
  path_cmd->add_option("--grid-lambda", path_grid_lambda, "Lambda grid (comma list or log:LO:HI:N)")
      ->required();
  path_cmd->add_option("--truth", path_truth, "True edge-list CSV (enables tpr/fpr and AUC)");
  path_cmd->add_flag("--no-warm", path_no_warm, "Disable warm starts along the grid");

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "Score an estimated graph against a true edge set");
  std::string eval_est, eval_truth, eval_out = ".";
  eval_cmd->add_option("--est", eval_est, "Estimated graph JSON")->required();
  eval_cmd->add_option("--truth", eval_truth, "True edge-list CSV")->required();
  eval_cmd->add_option("--out-dir", eval_out, "Output directory");

  // ---- tune ----
  auto* tune_cmd = app.add_subcommand("tune", "Estimation-stability tuning selection");
  std::string tune_dataset, tune_family, tune_rule = "intersection", tune_out = ".";
  std::string tune_grid_lambda, tune_grid_beta, tune_grid_gamma;
  PenaltyConfig tune_cfg;
  FitSettings tune_settings;
  int tune_threads = static_cast<int>(std::thread::hardware_concurrency());
  EsOptions es_options;
  add_fit_options(tune_cmd, tune_dataset, tune_family, tune_cfg, tune_rule, tune_threads, tune_out,
                  tune_settings);
  tune_cmd->add_option("--grid-lambda", tune_grid_lambda, "Lambda grid")->required();
  tune_cmd->add_option("--grid-beta", tune_grid_beta, "Beta grid (default: --beta)");
  tune_cmd->add_option("--grid-gamma", tune_grid_gamma, "Gamma grid (default: --gamma)");
  tune_cmd->add_option("--folds", es_options.folds, "Refit subsets (default 5)");
  tune_cmd->add_option("--seed", es_options.seed, "Fold-assignment seed");
  tune_cmd->add_flag("--es-training-only", es_options.eval_on_training_only,
                     "Evaluate predictors on each fold's training subjects only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (sim_cmd->parsed()) {
    const fs::path dir(sim_out);
    fs::create_directories(dir);
    const auto out = run_scenario(sim_scenario, sim_n, sim_T, sim_p, sim_q, sim_density, sim_fill,
                                  gibbs, sim_seed);
    write_dataset_csv(out.sim.data, (dir / "dataset.csv").string());
    write_edge_csv(out.sim.truth.true_edges(), (dir / "truth_edges.csv").string());
    write_matrix_csv(out.sim.truth.theta_xx, (dir / "truth_precision.csv").string());
    write_matrix_csv(out.sim.truth.A, (dir / "transition.csv").string());
    if (out.sim.truth.q > 0 && out.regime != "none")
      write_latent_csv(out.sim.truth, (dir / "latent.csv").string());
    json resolved;
    resolved["scenario"] = sim_scenario;
    resolved["n"] = sim_n;
    resolved["T"] = sim_T;
    resolved["p"] = sim_p;
    resolved["q"] = out.regime == "none" ? 0 : sim_q;
    resolved["density"] = sim_density;
    resolved["fill"] = sim_fill;
    resolved["transition"] = out.transition_kind;
    resolved["latent_regime"] = out.regime;
    resolved["family"] = family_name(out.sim.data.family);
    if (sim_scenario == "ising") {
      resolved["burn_in"] = gibbs.burn_in;
      resolved["thin"] = gibbs.thin;
      resolved["per_replicate_burn_in"] = gibbs.per_replicate_burn_in;
    }
    if (!out.sim.truth.warning.empty()) resolved["warning"] = out.sim.truth.warning;
    write_manifest(dir, "simulate", resolved, sim_seed);
    return 0;
  }

  if (fit_cmd->parsed()) {
    const fs::path dir(fit_out);
    fs::create_directories(dir);
    const Family family = family_from_string(fit_family);
    ReplicateDataset data = read_dataset_csv(fit_dataset, family);
    const bool centered = family == Family::gaussian;
    if (centered) data = center_dataset(data);
    if (fit_theory) {
      theory.n = data.n;
      theory.T = data.T;
      theory.p = data.p;
      const auto defaults = theory_defaults(theory, fit_no_confounders);
      fit_cfg.lambda = defaults.config.lambda;
      fit_cfg.beta = defaults.config.beta;
      fit_cfg.gamma = fit_gamma_pinned ? defaults.gamma_pinned : defaults.config.gamma;
    }
    fit_settings.threads = fit_threads;
    fit_settings.ggd.tol = fit_settings.bcd.tol;
    fit_settings.ggd.max_outer = fit_settings.bcd.max_outer;
    fit_settings.ggd.inner_tol = fit_settings.bcd.inner_tol;
    fit_settings.ggd.inner_max_sweeps = fit_settings.bcd.inner_max_sweeps;
    fit_settings.ggd.intercept = fit_intercept;
    const FusedBasis basis = FusedBasis::build(data.n, data.T);
    const auto fits = fit_all_nodes(data, fit_cfg, basis, fit_settings);
    const auto graph = symmetrize(fits, rule_from_string(fit_rule), fit_zero_tol);
    write_graph_json(graph, (dir / "graph.json").string());
    write_coefficients_csv(fits, dir / "coefficients.csv");
    write_delta_csv(fits, data.n, data.T, dir / "delta.csv");
    json resolved = config_json(fit_cfg);
    resolved["family"] = family_name(family);
    resolved["rule"] = fit_rule;
    resolved["centered"] = centered;
    resolved["theory_defaults"] = fit_theory;
    resolved["threads"] = fit_threads;
    resolved["n"] = data.n;
    resolved["T"] = data.T;
    resolved["p"] = data.p;
    resolved["edges"] = graph.edges.size();
    int non_converged = 0;
    for (const auto& f : fits)
      if (!f.converged) ++non_converged;
    resolved["non_converged_nodes"] = non_converged;
    write_manifest(dir, "fit", resolved, 0);
    if (non_converged > 0) {
      std::cerr << "warning: " << non_converged << " node fits did not converge\n";
      return kExitNumerical;
    }
    return 0;
  }

  if (path_cmd->parsed()) {
    const fs::path dir(path_out);
    fs::create_directories(dir);
    const Family family = family_from_string(path_family);
    ReplicateDataset data = read_dataset_csv(path_dataset, family);
    if (family == Family::gaussian) data = center_dataset(data);
    path_settings.threads = path_threads;
    path_settings.ggd.tol = path_settings.bcd.tol;
    path_settings.ggd.max_outer = path_settings.bcd.max_outer;
    path_settings.ggd.inner_tol = path_settings.bcd.inner_tol;
    path_settings.ggd.inner_max_sweeps = path_settings.bcd.inner_max_sweeps;
    const FusedBasis basis = FusedBasis::build(data.n, data.T);
    std::vector<PenaltyConfig> grid;
    for (const double lambda : parse_grid(path_grid_lambda)) {
      PenaltyConfig cfg = path_cfg;
      cfg.lambda = lambda;
      grid.push_back(cfg);
    }
    std::vector<std::pair<int, int>> truth;
    const bool have_truth = !path_truth.empty();
    if (have_truth) truth = read_edge_csv(path_truth);
    const SymmetrizeRule rule = rule_from_string(path_rule);

    std::vector<RocRow> rows(grid.size());
    std::vector<NodeFit> previous;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<NodeFit> fits;
      if (path_no_warm)
        fits = fit_all_nodes(data, grid[g], basis, path_settings);
      else
        fits = fit_all_nodes(data, grid[g], basis, path_settings,
                             previous.empty() ? nullptr : &previous);
      const auto graph = symmetrize(fits, rule);
      rows[g].config = grid[g];
      rows[g].edges = static_cast<int>(graph.edges.size());
      if (have_truth) {
        const auto score = tpr_fpr(graph, truth, data.p);
        rows[g].tpr = score.tpr;
        rows[g].fpr = score.fpr;
      }
      if (!path_no_warm) previous = std::move(fits);
    }
    write_roc_csv(rows, (dir / "roc.csv").string());
    json resolved = config_json(path_cfg);
    resolved["family"] = family_name(family);
    resolved["rule"] = path_rule;
    resolved["grid_lambda"] = path_grid_lambda;
    resolved["warm_start"] = !path_no_warm;
    resolved["threads"] = path_threads;
    if (have_truth) {
      std::vector<std::pair<double, double>> points;
      for (const auto& row : rows)
        if (row.tpr && row.fpr) points.emplace_back(*row.fpr, *row.tpr);
      if (!points.empty()) {
        const double auc = roc_auc(points);
        json auc_json;
        auc_json["auc"] = auc;
        auc_json["points"] = points.size();
        auc_json["rule"] = path_rule;
        auto out = open_output((dir / "auc_summary.json").string());
        out << auc_json.dump(2) << '\n';
        resolved["auc"] = auc;
      }
    }
    write_manifest(dir, "path", resolved, 0);
    return 0;
  }

  if (eval_cmd->parsed()) {
    const fs::path dir(eval_out);
    fs::create_directories(dir);
    const GraphEstimate est = read_graph_json(eval_est);
    const auto truth = read_edge_csv(eval_truth);
    const auto score = tpr_fpr(est, truth, est.p);
    json out_json;
    out_json["p"] = est.p;
    out_json["estimated_edges"] = est.edges.size();
    out_json["true_edges"] = truth.size();
    if (score.tpr)
      out_json["tpr"] = *score.tpr;
    else
      out_json["tpr"] = nullptr;
    if (score.fpr)
      out_json["fpr"] = *score.fpr;
    else
      out_json["fpr"] = nullptr;
    auto out = open_output((dir / "score.json").string());
    out << out_json.dump(2) << '\n';
    std::cout << "tpr=" << (score.tpr ? fmt_g17(*score.tpr) : "undefined")
              << " fpr=" << (score.fpr ? fmt_g17(*score.fpr) : "undefined") << '\n';
    return 0;
  }

  if (tune_cmd->parsed()) {
    const fs::path dir(tune_out);
    fs::create_directories(dir);
    const Family family = family_from_string(tune_family);
    ReplicateDataset data = read_dataset_csv(tune_dataset, family);
    if (family == Family::gaussian) data = center_dataset(data);
    tune_settings.threads = 1;
    tune_settings.ggd.tol = tune_settings.bcd.tol;
    tune_settings.ggd.max_outer = tune_settings.bcd.max_outer;
    tune_settings.ggd.inner_tol = tune_settings.bcd.inner_tol;
    tune_settings.ggd.inner_max_sweeps = tune_settings.bcd.inner_max_sweeps;
    es_options.fit = tune_settings;
    es_options.fit.threads = tune_threads;

    const auto lambdas = parse_grid(tune_grid_lambda);
    const auto betas = tune_grid_beta.empty() ? std::vector<double>{tune_cfg.beta}
                                              : parse_grid(tune_grid_beta);
    const auto gammas = tune_grid_gamma.empty() ? std::vector<double>{tune_cfg.gamma}
                                                : parse_grid(tune_grid_gamma);
    std::vector<PenaltyConfig> grid;
    for (const double lambda : lambdas)
      for (const double beta : betas)
        for (const double gamma : gammas) {
          PenaltyConfig cfg = tune_cfg;
          cfg.lambda = lambda;
          cfg.beta = beta;
          cfg.gamma = gamma;
          grid.push_back(cfg);
        }
    const auto result = es_select(data, grid, es_options);
    json report = es_report_to_json(grid, result);
    report["family"] = family_name(family);
    auto out = open_output((dir / "es_report.json").string());
    out << report.dump(2) << '\n';
    json resolved;
    resolved["family"] = family_name(family);
    resolved["grid_size"] = grid.size();
    resolved["folds"] = es_options.folds;
    resolved["selected"] = config_json(grid[static_cast<std::size_t>(result.selected)]);
    resolved["threads"] = tune_threads;
    write_manifest(dir, "tune", resolved, es_options.seed);
    return 0;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const divergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
