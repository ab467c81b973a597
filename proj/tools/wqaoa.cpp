// SPDX-License-Identifier: Apache-2.0
// Command-line front end: transfer, optimize, scan, kde, experiment, generate.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wqaoa/error.hpp"
#include "wqaoa/experiment.hpp"
#include "wqaoa/kde.hpp"
#include "wqaoa/optimizer.hpp"
#include "wqaoa/rng.hpp"
#include "wqaoa/serialize.hpp"
#include "wqaoa/simulator.hpp"
#include "wqaoa/transfer.hpp"

namespace {

using namespace wqaoa;
constexpr double kPi = std::numbers::pi;

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Io:
    case ErrorKind::Parse: return 2;
    case ErrorKind::Resource: return 3;
    default: return 1;
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

std::string vec(const std::vector<double>& v, double scale = 1.0) {
  std::string s = "[";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.10g", i ? ", " : "", v[i] * scale);
    s += buf;
  }
  return s + "]";
}

struct TransferArgs {
  std::string graph;
  int p = 1;
  std::string median_table;
  bool sqrt_scaling = false;
  bool allow_unit_degree = false;
  std::string kde_model;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_transfer(const TransferArgs& a) {
  const auto g = read_graph_file(a.graph);
  const auto table = a.median_table.empty() ? ScaledMedianTable::builtin() : ScaledMedianTable::from_file(a.median_table);
  TransferOptions opts{a.sqrt_scaling ? DegreeScaling::Sqrt : DegreeScaling::Arctan, a.allow_unit_degree};
  auto params = transfer_params(table, {g, a.p}, opts);
  const ProblemInstance inst(g);
  std::optional<KdeTransferResult> kde;
  if (!a.kde_model.empty()) {
    const auto model = kde_model_from_json(parse_json(read_text_file(a.kde_model), a.kde_model));
    kde = kde_transfer(model, table, inst, a.p, a.samples, a.seed, opts);
    params = kde->params;
  }
  const double e = inst.expectation(params);
  const double r = inst.ratio(e);
  if (a.json) {
    Json j = params_to_json(params);
    j["expectation"] = e;
    j["ratio"] = r;
    j["c_min"] = inst.c_min();
    j["c_max"] = inst.c_max();
    if (kde) j["kde_chosen"] = kde->chosen;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "p          " << a.p << '\n'
            << "beta       " << vec(params.beta()) << '\n'
            << "gamma      " << vec(params.gamma()) << '\n'
            << "beta/pi    " << vec(params.beta(), 1.0 / kPi) << '\n'
            << "gamma/pi   " << vec(params.gamma(), 1.0 / kPi) << '\n';
  std::printf("<C>        %.10g\nr          %.10g\n", e, r);
  if (kde) std::printf("kde choice %zu of %zu samples (median ratio %.10g)\n", kde->chosen, a.samples, kde->median_ratio);
  return 0;
}

struct OptimizeArgs {
  std::string graph;
  std::string output;
  int p = 1;
  std::optional<int> starts;
  std::uint64_t seed = 0;
  std::vector<double> beta_bounds, gamma_bounds;
  int workers = 1;
  bool polish = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  const ProblemInstance inst(read_graph_file(a.graph));
  OptimizerConfig cfg;
  cfg.p = a.p;
  cfg.rng_seed = a.seed;
  cfg.workers = a.workers;
  cfg.n_starts = a.starts.value_or(default_start_count(a.p, false));
  if (!a.beta_bounds.empty()) cfg.beta_bounds = Interval{a.beta_bounds[0], a.beta_bounds[1]};
  if (!a.gamma_bounds.empty()) cfg.gamma_bounds = Interval{a.gamma_bounds[0], a.gamma_bounds[1]};
  const auto res = a.polish ? polish_transferred(inst, transfer_params(ScaledMedianTable::builtin(), {inst.graph(), a.p}), cfg)
                            : multistart_optimize(inst, cfg);
  auto j = optimization_result_to_json(res, cfg);
  emit(j.dump(2) + "\n", a.output);
  if (!a.output.empty() && a.output != "-")
    std::printf("best r %.12g (start %zu of %zu)\n", res.best_ratio, res.best_start, res.starts.size());
  return 0;
}

struct ScanArgs {
  std::string graph;
  std::string output;
  std::vector<double> beta{-0.25, 0.25};
  std::vector<double> gamma{-1.0, 1.0};
  std::vector<int> points{64, 64};
};

int cmd_scan(const ScanArgs& a) {
  const auto g = read_graph_file(a.graph);
  const auto scan = landscape_scan(g, {a.beta[0] * kPi, a.beta[1] * kPi, a.points[0]},
                                   {a.gamma[0] * kPi, a.gamma[1] * kPi, a.points[1]});
  std::ostringstream out;
  write_landscape_csv(out, scan);
  emit(out.str(), a.output);
  return 0;
}

struct KdeTrainArgs {
  std::string input;
  std::string output;
  std::vector<double> grid;
  double grid_min = 1e-3, grid_max = 1.0;
  int grid_points = 20;
  std::uint64_t seed = 0;
};

int cmd_kde_train(const KdeTrainArgs& a) {
  const auto points = matrix_from_json(parse_json(read_text_file(a.input), a.input));
  std::vector<double> grid = a.grid;
  if (grid.empty()) {
    if (a.grid_points < 1 || !(a.grid_min > 0.0) || !(a.grid_max >= a.grid_min))
      throw DomainError("bandwidth grid needs 0 < min <= max and at least one point");
    for (int i = 0; i < a.grid_points; ++i) {
      const double t = a.grid_points == 1 ? 0.0 : static_cast<double>(i) / (a.grid_points - 1);
      grid.push_back(a.grid_min * std::pow(a.grid_max / a.grid_min, t));
    }
  }
  const auto fit = fit_bandwidth(points, grid, a.seed);
  const KdeModel model(points, fit.bandwidth);
  emit(kde_model_to_json(model).dump() + "\n", a.output);
  std::fprintf(stderr, "bandwidth %.6g from %zu candidates, %zu points, p=%d\n", fit.bandwidth, grid.size(),
               model.size(), model.depth());
  return 0;
}

struct KdeSampleArgs {
  std::string model;
  std::string output;
  std::size_t count = 10;
  std::uint64_t seed = 0;
};

int cmd_kde_sample(const KdeSampleArgs& a) {
  const auto model = kde_model_from_json(parse_json(read_text_file(a.model), a.model));
  emit(matrix_to_json(sample(model, a.count, a.seed)).dump() + "\n", a.output);
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string output_dir;
  int workers = 0;
};

int cmd_experiment(const ExperimentArgs& a) {
  const std::filesystem::path path(a.config);
  auto cfg = experiment_config_from_json(parse_json(read_text_file(path), a.config), path.parent_path());
  if (a.workers > 0) cfg.workers = a.workers;
  if (const char* env = std::getenv("WQAOA_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  if (cfg.output_dir.empty()) cfg.output_dir = std::filesystem::path("results") / cfg.name;
  const auto res = run_experiment(cfg);
  write_experiment_outputs(cfg, res, cfg.output_dir);
  std::printf("%zu records (%zu incomplete) written to %s\n", res.outcomes.size(), res.incomplete.size(),
              cfg.output_dir.string().c_str());
  for (const auto& [p, s] : res.per_depth) {
    std::printf("p=%d  n=%zu  median r_t=%.4f", p, s.count, s.r_transferred.median);
    if (s.median_gap_pp) std::printf("  median gap %.3f pp", *s.median_gap_pp);
    if (s.recovery_rate) std::printf("  recovery %.1f%%", 100.0 * *s.recovery_rate);
    std::printf("\n");
  }
  return 0;
}

struct GenerateArgs {
  std::string output;
  int n = 10;
  double edge_prob = 0.5;
  int count = 1;
  std::string distribution;
  double parameter = 1.0;
  std::uint64_t seed = 0;
  bool rescale = false;
};

int cmd_generate(const GenerateArgs& a) {
  ExperimentConfig cfg;
  cfg.corpus.n = a.n;
  cfg.corpus.edge_prob = a.edge_prob;
  cfg.corpus.count = a.count;
  cfg.seeds.corpus = a.seed;
  cfg.seeds.weights = derive_seed(a.seed, 1u << 20);
  if (!a.distribution.empty()) cfg.distribution = make_distribution(a.distribution, a.parameter);
  cfg.rescale = a.rescale;
  std::ostringstream out;
  for (const auto& e : build_corpus(cfg)) out << graph_to_json(e.graph).dump() << '\n';
  emit(out.str(), a.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter transfer and optimization for QAOA on weighted MaxCut"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wqaoa 1.0.0");

  TransferArgs ta;
  auto* transfer = app.add_subcommand("transfer", "Transfer median parameters to a weighted graph");
  transfer->add_option("graph", ta.graph, "Graph file (.json or .g6)")->required();
  transfer->add_option("-p,--depth", ta.p, "QAOA depth");
  transfer->add_option("--median-table", ta.median_table, "JSON file with scaled median parameters");
  transfer->add_flag("--sqrt-scaling", ta.sqrt_scaling, "Use 1/sqrt(d) degree scaling");
  transfer->add_flag("--allow-unit-degree", ta.allow_unit_degree, "Accept average degree 1");
  transfer->add_option("--kde-model", ta.kde_model, "Also try samples from this KDE model");
  transfer->add_option("-k,--samples", ta.samples, "Number of KDE samples");
  transfer->add_option("--seed", ta.seed, "Sampling seed");
  transfer->add_flag("--json", ta.json, "Print JSON");

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "Multistart BFGS optimization of a graph");
  optimize->add_option("graph", oa.graph, "Graph file")->required();
  optimize->add_option("-p,--depth", oa.p, "QAOA depth");
  optimize->add_option("-n,--starts", oa.starts, "Number of random starts (default depends on p)");
  optimize->add_option("--seed", oa.seed, "Seed for random starts");
  optimize->add_option("--beta-bounds", oa.beta_bounds, "Start interval for beta (radians)")->expected(2);
  optimize->add_option("--gamma-bounds", oa.gamma_bounds, "Start interval for gamma (radians)")->expected(2);
  optimize->add_option("-j,--workers", oa.workers, "Worker threads");
  optimize->add_flag("--polish", oa.polish, "Single run from transferred parameters");
  optimize->add_option("-o,--output", oa.output, "Output JSON file");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Depth-1 landscape scan as CSV");
  scan->add_option("graph", sa.graph, "Graph file")->required();
  scan->add_option("--beta", sa.beta, "Beta range in units of pi")->expected(2);
  scan->add_option("--gamma", sa.gamma, "Gamma range in units of pi")->expected(2);
  scan->add_option("--points", sa.points, "Grid points for beta and gamma")->expected(2);
  scan->add_option("-o,--output", sa.output, "Output CSV file");

  auto* kde = app.add_subcommand("kde", "Kernel density model of optimized parameters");
  kde->require_subcommand(1);
  KdeTrainArgs kt;
  auto* train = kde->add_subcommand("train", "Fit a model with cross-validated bandwidth");
  train->add_option("input", kt.input, "Training matrix JSON")->required();
  train->add_option("-o,--output", kt.output, "Model file");
  train->add_option("--bandwidths", kt.grid, "Explicit bandwidth candidates");
  train->add_option("--grid-min", kt.grid_min);
  train->add_option("--grid-max", kt.grid_max);
  train->add_option("--grid-points", kt.grid_points);
  train->add_option("--seed", kt.seed, "Fold shuffle seed");
  KdeSampleArgs ks;
  auto* samp = kde->add_subcommand("sample", "Draw parameter vectors from a model");
  samp->add_option("model", ks.model, "Model file")->required();
  samp->add_option("-k,--count", ks.count, "Number of samples");
  samp->add_option("--seed", ks.seed, "Sampling seed");
  samp->add_option("-o,--output", ks.output, "Output matrix JSON");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a batch experiment from a JSON config");
  experiment->add_option("config", ea.config, "Config file")->required();
  experiment->add_option("-o,--output-dir", ea.output_dir, "Result directory (overrides WQAOA_OUTPUT_DIR)");
  experiment->add_option("-j,--workers", ea.workers, "Worker threads");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Sample Erdos-Renyi graphs as JSONL");
  generate->add_option("-n,--vertices", ga.n);
  generate->add_option("--edge-prob", ga.edge_prob);
  generate->add_option("-c,--count", ga.count);
  generate->add_option("--distribution", ga.distribution,
                       "uniform_positive, uniform_symmetric, exponential or truncated_cauchy");
  generate->add_option("--parameter", ga.parameter, "Distribution parameter");
  generate->add_option("--seed", ga.seed);
  generate->add_flag("--rescale", ga.rescale, "Rescale to mean |w| = 1");
  generate->add_option("-o,--output", ga.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*transfer) return cmd_transfer(ta);
    if (*optimize) return cmd_optimize(oa);
    if (*scan) return cmd_scan(sa);
    if (*train) return cmd_kde_train(kt);
    if (*samp) return cmd_kde_sample(ks);
    if (*experiment) return cmd_experiment(ea);
    if (*generate) return cmd_generate(ga);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
