#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = REPGRAPH_CLI_PATH;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

int run_cli(const std::string& args) {
  const std::string command = cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("simulate writes the documented files and echoes the manifest") {
  TempDir dir("repgraph_cli_sim");
  const int code = run_cli("simulate --scenario ar1-sparse --n 8 --T 6 --p 10 --seed 7 --out-dir " +
                           dir.str());
  CHECK(code == 0);
  CHECK(fs::exists(dir.path / "dataset.csv"));
  CHECK(fs::exists(dir.path / "truth_edges.csv"));
  CHECK(fs::exists(dir.path / "truth_precision.csv"));
  CHECK(fs::exists(dir.path / "transition.csv"));
  const auto manifest = slurp_json(dir.path / "manifest.json");
  CHECK(manifest.at("config").at("n") == 8);
  CHECK(manifest.at("config").at("T") == 6);
  CHECK(manifest.at("config").at("p") == 10);
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("tool") == "repgraph");
}

TEST_CASE("simulate is byte-identical across repeated runs") {
  TempDir a("repgraph_cli_det_a"), b("repgraph_cli_det_b");
  const std::string args = "simulate --scenario combined-piecewise --n 6 --T 8 --p 6 --q 2 --seed 5";
  CHECK(run_cli(args + " --out-dir " + a.str()) == 0);
  CHECK(run_cli(args + " --out-dir " + b.str()) == 0);
  for (const char* name : {"dataset.csv", "truth_edges.csv", "truth_precision.csv", "latent.csv",
                           "manifest.json"})
    CHECK(slurp(a.path / name) == slurp(b.path / name));
}

TEST_CASE("ising scenario produces binary data and gibbs config in the manifest") {
  TempDir dir("repgraph_cli_ising");
  const int code = run_cli(
      "simulate --scenario ising --n 4 --T 5 --p 4 --q 2 --burn-in 50 --thin 5 --seed 3 --out-dir " +
      dir.str());
  CHECK(code == 0);
  const auto d = repgraph::read_dataset_csv((dir.path / "dataset.csv").string(), repgraph::Family::ising);
  CHECK(d.n == 4);
  CHECK(d.p == 4);
  const auto manifest = slurp_json(dir.path / "manifest.json");
  CHECK(manifest.at("config").at("burn_in") == 50);
  CHECK(manifest.at("config").at("thin") == 5);
  // reference defaults are what the library ships when flags are omitted
  CHECK(repgraph::GibbsSettings{}.burn_in == 10000);
  CHECK(repgraph::GibbsSettings{}.thin == 1000);
}

TEST_CASE("unknown scenario exits with the usage code") {
  TempDir dir("repgraph_cli_bad");
  CHECK(run_cli("simulate --scenario nope --out-dir " + dir.str()) == 2);
  CHECK(run_cli("fit --dataset /nonexistent.csv --family gaussian --out-dir " + dir.str()) == 2);
}

TEST_CASE("full shrinkage fit returns an empty graph; eval scores truth perfectly") {
  TempDir dir("repgraph_cli_fit");
  REQUIRE(run_cli("simulate --scenario ar1-diagonal --n 6 --T 6 --p 6 --seed 11 --out-dir " +
                  dir.str()) == 0);
  const std::string dataset = (dir.path / "dataset.csv").string();
  const int code = run_cli("fit --dataset " + dataset +
                           " --family gaussian --lambda 1e6 --beta 1e6 --gamma 1e6 --out-dir " +
                           dir.str());
  CHECK(code == 0);
  const auto graph = slurp_json(dir.path / "graph.json");
  CHECK(graph.at("edges").empty());
  CHECK(fs::exists(dir.path / "coefficients.csv"));
  CHECK(fs::exists(dir.path / "delta.csv"));

  // est == truth -> tpr 1, fpr 0 (build a graph json from the truth edges)
  const auto truth_edges = repgraph::read_edge_csv((dir.path / "truth_edges.csv").string());
  repgraph::GraphEstimate est;
  est.p = 6;
  est.rule = repgraph::SymmetrizeRule::intersection;
  est.edges = truth_edges;
  repgraph::write_graph_json(est, (dir.path / "est.json").string());
  CHECK(run_cli("eval --est " + (dir.path / "est.json").string() + " --truth " +
                (dir.path / "truth_edges.csv").string() + " --out-dir " + dir.str()) == 0);
  const auto score = slurp_json(dir.path / "score.json");
  CHECK(score.at("tpr").get<double>() == 1.0);
  CHECK(score.at("fpr").get<double>() == 0.0);
}

TEST_CASE("theory defaults resolve into the manifest") {
  TempDir dir("repgraph_cli_theory");
  REQUIRE(run_cli("simulate --scenario ar1-diagonal --n 50 --T 20 --p 100 --seed 2 --out-dir " +
                  dir.str()) == 0);
  const int code = run_cli("fit --dataset " + (dir.path / "dataset.csv").string() +
                           " --family gaussian --theory-defaults --sigma-m 1 --delta-max 1 --tau 1" +
                           " --lambda 0 --beta 0 --gamma 0 --out-dir " + dir.str());
  CHECK(code == 0);
  const auto manifest = slurp_json(dir.path / "manifest.json");
  CHECK(manifest.at("config").at("theory_defaults") == true);
  CHECK(manifest.at("config").at("lambda").get<double>() == doctest::Approx(15.4243).epsilon(1e-4));
  CHECK(manifest.at("config").at("beta").get<double>() ==
        manifest.at("config").at("lambda").get<double>());
}

TEST_CASE("path writes one roc row per lambda with tpr/fpr against the truth") {
  TempDir dir("repgraph_cli_path");
  REQUIRE(run_cli("simulate --scenario combined-piecewise --n 8 --T 8 --p 6 --q 2 --seed 13 "
                  "--out-dir " +
                  dir.str()) == 0);
  const int code = run_cli("path --dataset " + (dir.path / "dataset.csv").string() +
                           " --family gaussian --grid-lambda log:0.02:0.5:10 --beta 0.02 --gamma 1" +
                           " --truth " + (dir.path / "truth_edges.csv").string() + " --out-dir " +
                           dir.str());
  CHECK(code == 0);
  std::istringstream roc(slurp(dir.path / "roc.csv"));
  std::string line;
  std::getline(roc, line);
  CHECK(line == "lambda,beta,gamma,edges,tpr,fpr");
  int rows = 0;
  double prev_lambda = 0.0;
  while (std::getline(roc, line)) {
    if (line.empty()) continue;
    const auto fields = repgraph::split_csv_line(line);
    REQUIRE(fields.size() == 6);
    const double lambda = repgraph::parse_double(fields[0], "roc");
    if (rows > 0) CHECK(lambda > prev_lambda);  // monotone grid column
    prev_lambda = lambda;
    ++rows;
  }
  CHECK(rows == 10);
  CHECK(fs::exists(dir.path / "auc_summary.json"));
  const auto auc = slurp_json(dir.path / "auc_summary.json");
  CHECK(auc.at("auc").get<double>() >= 0.0);
  CHECK(auc.at("auc").get<double>() <= 1.0);
}

TEST_CASE("starved fit exits with the numerical code but still writes outputs") {
  TempDir dir("repgraph_cli_nonconv");
  REQUIRE(run_cli("simulate --scenario ar1-sparse --n 6 --T 6 --p 6 --seed 29 --out-dir " +
                  dir.str()) == 0);
  const int code = run_cli("fit --dataset " + (dir.path / "dataset.csv").string() +
                           " --family gaussian --lambda 0.01 --beta 0.01 --gamma 0.5" +
                           " --max-outer 1 --tol 1e-30 --out-dir " + dir.str());
  CHECK(code == 3);
  CHECK(fs::exists(dir.path / "graph.json"));
  const auto manifest = slurp_json(dir.path / "manifest.json");
  CHECK(manifest.at("config").at("non_converged_nodes").get<int>() > 0);
}

TEST_CASE("fit outputs are byte-identical across thread counts") {
  TempDir dir("repgraph_cli_threads");
  REQUIRE(run_cli("simulate --scenario combined-piecewise --n 6 --T 6 --p 8 --q 2 --seed 17 "
                  "--out-dir " +
                  dir.str()) == 0);
  const std::string dataset = (dir.path / "dataset.csv").string();
  fs::create_directories(dir.path / "t1");
  fs::create_directories(dir.path / "t4");
  const std::string common = "fit --dataset " + dataset +
                             " --family gaussian --lambda 0.05 --beta 0.02 --gamma 1 --rule union";
  REQUIRE(run_cli(common + " --threads 1 --out-dir " + (dir.path / "t1").string()) == 0);
  REQUIRE(run_cli(common + " --threads 4 --out-dir " + (dir.path / "t4").string()) == 0);
  for (const char* name : {"graph.json", "coefficients.csv", "delta.csv"})
    CHECK(slurp(dir.path / "t1" / name) == slurp(dir.path / "t4" / name));
}

TEST_CASE("non-gaussian families fit through the binary") {
  TempDir dir("repgraph_cli_families");
  REQUIRE(run_cli("simulate --scenario ising --n 6 --T 5 --p 4 --q 2 --burn-in 100 --thin 10 "
                  "--seed 41 --out-dir " +
                  dir.str()) == 0);
  fs::create_directories(dir.path / "ising");
  // drop-delta: tiny binary samples separate the free per-subject levels
  CHECK(run_cli("fit --dataset " + (dir.path / "dataset.csv").string() +
                " --family ising --lambda 0.05 --beta 0.05 --gamma 0.5 --drop-delta --out-dir " +
                (dir.path / "ising").string()) == 0);
  CHECK(fs::exists(dir.path / "ising" / "graph.json"));

  // small poisson dataset written through the library
  repgraph::ReplicateDataset d;
  d.n = 4;
  d.T = 5;
  d.p = 3;
  d.family = repgraph::Family::poisson;
  d.values.resize(20, 3);
  repgraph::Rng rng(5);
  for (Eigen::Index r = 0; r < 20; ++r)
    for (int j = 0; j < 3; ++j) d.values(r, j) = static_cast<double>(rng.uniform_below(5));
  d.validate();
  repgraph::write_dataset_csv(d, (dir.path / "poisson.csv").string());
  fs::create_directories(dir.path / "poisson");
  CHECK(run_cli("fit --dataset " + (dir.path / "poisson.csv").string() +
                " --family poisson --lambda 0.1 --beta 0.1 --gamma 0.5 --eta-cap 3 --out-dir " +
                (dir.path / "poisson").string()) == 0);
  CHECK(fs::exists(dir.path / "poisson" / "graph.json"));
}

TEST_CASE("tune selects the minimum-ES config and reports it") {
  TempDir dir("repgraph_cli_tune");
  REQUIRE(run_cli("simulate --scenario latent-piecewise --n 10 --T 6 --p 5 --q 2 --seed 23 "
                  "--out-dir " +
                  dir.str()) == 0);
  const int code = run_cli("tune --dataset " + (dir.path / "dataset.csv").string() +
                           " --family gaussian --grid-lambda 0.05,0.2 --beta 0.02 --gamma 1" +
                           " --folds 5 --seed 3 --out-dir " + dir.str());
  CHECK(code == 0);
  const auto report = slurp_json(dir.path / "es_report.json");
  const int selected = report.at("selected").get<int>();
  const auto& grid = report.at("grid");
  REQUIRE(grid.size() == 2);
  double best = 1e300;
  for (const auto& entry : grid)
    if (entry.at("es").is_number()) best = std::min(best, entry.at("es").get<double>());
  CHECK(grid[static_cast<std::size_t>(selected)].at("es").get<double>() == doctest::Approx(best));
}
