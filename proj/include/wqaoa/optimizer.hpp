// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wqaoa/graph.hpp"
#include "wqaoa/simulator.hpp"

namespace wqaoa {

struct Interval {
  double lo;
  double hi;
};

/// Settings for local and multistart optimization. Bounds restrict the
/// random starting points only; BFGS iterates are unconstrained.
struct OptimizerConfig {
  int p = 1;
  int n_starts = 1;
  /// Defaults to [-pi/4, pi/4].
  std::optional<Interval> beta_bounds{};
  /// Defaults to [-pi/mean|w|, pi/mean|w|] of the instance.
  std::optional<Interval> gamma_bounds{};
  double grad_tolerance = 1e-8;
  int max_iterations = 500;
  std::uint64_t rng_seed = 0;
  /// Threads used by multistart_optimize. Results do not depend on it.
  int workers = 1;

  void validate() const;
};

/// Per-depth start counts used for the exhaustive baseline.
int default_start_count(int p, bool heavy_tailed_weights);

struct ObjectiveGradient {
  double value;
  std::vector<double> grad;
};

/// <C> and its exact gradient with respect to (beta_1..beta_p, gamma_1..gamma_p).
ObjectiveGradient objective_and_gradient(const WeightedGraph& g, const QaoaParams& params);

// Generic quasi-Newton ascent ------------------------------------------------

struct BfgsOptions {
  double grad_tolerance = 1e-8;
  int max_iterations = 500;
  double initial_step = 1.0;
  /// Length cap for steps along the raw gradient (first iteration and after
  /// a reset), before any curvature information exists.
  double max_gradient_step = 1.0;
  double contraction = 0.5;
  double sufficient_increase = 1e-4;
  /// Stop the line search once the step falls below this.
  double min_step = 1e-16;
};

struct BfgsTrace {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective after each accepted step, starting with the initial value.
  std::vector<double> accepted_values;
};

/// f(x, grad) returns the objective and fills grad. Maximizes f with BFGS on
/// -f and a backtracking Armijo line search. Throws NumericalError on a
/// non-finite objective or gradient.
using ValueAndGradient = std::function<double(std::span<const double>, std::span<double>)>;
BfgsTrace bfgs_ascent(const ValueAndGradient& f, std::vector<double> x0, const BfgsOptions& options);

// QAOA-specific ---------------------------------------------------------------

struct LocalResult {
  QaoaParams params;
  double objective;
  bool converged;
  int iterations;
  std::vector<double> accepted_values;
};

LocalResult bfgs_maximize(const WeightedGraph& g, const QaoaParams& init, const OptimizerConfig& config);
LocalResult bfgs_maximize(QaoaEvaluator& evaluator, const QaoaParams& init, const OptimizerConfig& config);

struct StartRecord {
  QaoaParams init;
  std::optional<QaoaParams> final_params;
  double final_objective;
  int iterations;
  bool converged;
  /// Set when the start failed numerically.
  std::optional<std::string> error;
};

struct OptimizationResult {
  QaoaParams best_params;
  double best_objective;
  double best_ratio;
  std::size_t best_start;
  std::vector<StartRecord> starts;
};

/// Uniform random start number `index` for the seed in `config`. Start k is
/// the same point for every n_starts > k.
QaoaParams random_start(const ProblemInstance& instance, const OptimizerConfig& config, std::size_t index);

OptimizationResult multistart_optimize(const ProblemInstance& instance, const OptimizerConfig& config);
OptimizationResult multistart_optimize(const WeightedGraph& g, const OptimizerConfig& config);

/// One BFGS run from transferred parameters.
OptimizationResult polish_transferred(const ProblemInstance& instance, const QaoaParams& transferred,
                                      const OptimizerConfig& config);
OptimizationResult polish_transferred(const WeightedGraph& g, const QaoaParams& transferred,
                                      const OptimizerConfig& config);

/// Total local optimizations started in this process.
std::uint64_t local_optimization_count();

}  // namespace wqaoa
