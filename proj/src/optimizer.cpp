// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "wqaoa/error.hpp"
#include "wqaoa/parallel.hpp"
#include "wqaoa/rng.hpp"

namespace wqaoa {

namespace {

std::atomic<std::uint64_t> g_local_runs{0};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void set_identity(std::vector<double>& h, std::size_t n, double scale = 1.0) {
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = scale;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (p < 1) throw DomainError("depth p must be at least 1");
  if (n_starts < 1) throw DomainError("n_starts must be at least 1");
  if (!(grad_tolerance > 0.0)) throw DomainError("grad_tolerance must be positive");
  if (max_iterations < 0) throw DomainError("max_iterations must be nonnegative");
  if (workers < 1) throw DomainError("worker count must be at least 1");
  for (const auto& b : {beta_bounds, gamma_bounds})
    if (b && !(std::isfinite(b->lo) && std::isfinite(b->hi) && b->lo < b->hi))
      throw DomainError("initialization bounds must be finite nonempty intervals");
}

int default_start_count(int p, bool heavy_tailed_weights) {
  static constexpr int kStandard[] = {50, 200, 1500};
  static constexpr int kHeavyTailed[] = {200, 500, 3000};
  if (p < 1 || p > 3) throw DomainError("no default start count for p=" + std::to_string(p));
  return heavy_tailed_weights ? kHeavyTailed[p - 1] : kStandard[p - 1];
}

ObjectiveGradient objective_and_gradient(const WeightedGraph& g, const QaoaParams& params) {
  QaoaEvaluator eval(g);
  ObjectiveGradient out{0.0, std::vector<double>(2 * static_cast<std::size_t>(params.depth()))};
  out.value = eval.value_and_gradient(params, out.grad);
  return out;
}

BfgsTrace bfgs_ascent(const ValueAndGradient& f, std::vector<double> x0, const BfgsOptions& options) {
  const std::size_t n = x0.size();
  // Minimize F = -f; g holds grad F.
  auto eval = [&](std::span<const double> x, std::span<double> g) {
    const double value = f(x, g);
    if (!std::isfinite(value) || !all_finite(g)) throw NumericalError("non-finite objective or gradient in BFGS");
    for (auto& gi : g) gi = -gi;
    return -value;
  };

  BfgsTrace trace;
  trace.x = std::move(x0);
  std::vector<double> g(n), x_new(n), g_new(n), d(n), s(n), y(n), hy(n);
  std::vector<double> h(n * n);
  set_identity(h, n);
  bool h_is_identity = true;
  bool first_update = true;

  double F = eval(trace.x, g);
  trace.accepted_values.push_back(-F);

  for (int it = 0; it < options.max_iterations; ++it) {
    if (inf_norm(g) <= options.grad_tolerance) {
      trace.converged = true;
      break;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc -= h[i * n + j] * g[j];
        d[i] = acc;
      }
      double slope = dot(g, d);
      if (!(slope < 0.0)) {
        set_identity(h, n);
        h_is_identity = true;
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        slope = dot(g, d);
      }
      double step = options.initial_step;
      if (h_is_identity) step = std::min(step, options.max_gradient_step / std::sqrt(dot(d, d)));
      while (step >= options.min_step) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          x_new[i] = trace.x[i] + step * d[i];
          moved |= x_new[i] != trace.x[i];
        }
        if (!moved) break;
        const double F_new = eval(x_new, g_new);
        // Demand actual progress: once the objective is flat to rounding the
        // Armijo test alone accepts null steps forever.
        if (F_new <= F + options.sufficient_increase * step * slope && F_new < F) {
          for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - trace.x[i];
            y[i] = g_new[i] - g[i];
          }
          trace.x.swap(x_new);
          g.swap(g_new);
          F = F_new;
          accepted = true;
          break;
        }
        step *= options.contraction;
      }
      if (!accepted) {
        // Retry once along steepest descent before giving up.
        if (h_is_identity) break;
        set_identity(h, n);
        h_is_identity = true;
      }
    }
    if (!accepted) break;
    ++trace.iterations;
    trace.accepted_values.push_back(-F);

    const double sy = dot(s, y);
    if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y)) && sy > 0.0) {
      if (first_update) {
        set_identity(h, n, sy / dot(y, y));
        first_update = false;
      }
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += h[i * n + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
      h_is_identity = false;
    }
  }
  if (!trace.converged && inf_norm(g) <= options.grad_tolerance) trace.converged = true;
  trace.value = -F;
  return trace;
}

LocalResult bfgs_maximize(QaoaEvaluator& evaluator, const QaoaParams& init, const OptimizerConfig& config) {
  if (init.depth() != config.p)
    throw DimensionError("initial parameters have depth " + std::to_string(init.depth()) + ", config expects p=" +
                         std::to_string(config.p));
  g_local_runs.fetch_add(1, std::memory_order_relaxed);
  BfgsOptions options;
  options.grad_tolerance = config.grad_tolerance;
  options.max_iterations = config.max_iterations;
  auto f = [&](std::span<const double> x, std::span<double> grad) {
    for (double xi : x)
      if (!std::isfinite(xi)) throw NumericalError("non-finite QAOA parameter during BFGS");
    return evaluator.value_and_gradient(QaoaParams::from_flat(x), grad);
  };
  auto trace = bfgs_ascent(f, init.flat(), options);
  return {QaoaParams::from_flat(trace.x), trace.value, trace.converged, trace.iterations,
          std::move(trace.accepted_values)};
}

LocalResult bfgs_maximize(const WeightedGraph& g, const QaoaParams& init, const OptimizerConfig& config) {
  config.validate();
  QaoaEvaluator eval(g);
  return bfgs_maximize(eval, init, config);
}

QaoaParams random_start(const ProblemInstance& instance, const OptimizerConfig& config, std::size_t index) {
  const Interval beta = config.beta_bounds.value_or(Interval{-std::numbers::pi / 4.0, std::numbers::pi / 4.0});
  Interval gamma{};
  if (config.gamma_bounds) {
    gamma = *config.gamma_bounds;
  } else {
    const double span = std::numbers::pi / average_abs_weight(instance.graph());
    gamma = {-span, span};
  }
  Rng rng = Rng(config.rng_seed).split(index);
  std::vector<double> b(static_cast<std::size_t>(config.p));
  std::vector<double> g(static_cast<std::size_t>(config.p));
  for (auto& x : b) x = rng.uniform(beta.lo, beta.hi);
  for (auto& x : g) x = rng.uniform(gamma.lo, gamma.hi);
  return QaoaParams(std::move(b), std::move(g));
}

namespace {

OptimizationResult reduce_starts(const ProblemInstance& instance, std::vector<StartRecord> starts) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (starts[i].error) continue;
    if (!best || starts[i].final_objective > starts[*best].final_objective) best = i;
  }
  if (!best) {
    std::string first = starts.empty() ? "no starts" : *starts.front().error;
    throw NumericalError("all " + std::to_string(starts.size()) + " optimization starts failed; first error: " + first);
  }
  const auto& b = starts[*best];
  return {*b.final_params, b.final_objective, instance.ratio(b.final_objective), *best, std::move(starts)};
}

StartRecord run_start(QaoaEvaluator& eval, const QaoaParams& init, const OptimizerConfig& config) {
  try {
    auto local = bfgs_maximize(eval, init, config);
    return {init, local.params, local.objective, local.iterations, local.converged, std::nullopt};
  } catch (const NumericalError& e) {
    return {init, std::nullopt, -std::numeric_limits<double>::infinity(), 0, false, std::string(e.what())};
  }
}

}  // namespace

OptimizationResult multistart_optimize(const ProblemInstance& instance, const OptimizerConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n_starts);
  std::vector<std::optional<StartRecord>> slots(n);
  const int workers = std::min(config.workers, config.n_starts);
  if (workers <= 1) {
    QaoaEvaluator eval(instance.diagonal());
    for (std::size_t i = 0; i < n; ++i) slots[i] = run_start(eval, random_start(instance, config, i), config);
  } else {
    parallel_for(n, workers, [&](std::size_t i) {
      QaoaEvaluator eval(instance.diagonal());
      slots[i] = run_start(eval, random_start(instance, config, i), config);
    });
  }
  std::vector<StartRecord> starts;
  starts.reserve(n);
  for (auto& s : slots) starts.push_back(std::move(*s));
  return reduce_starts(instance, std::move(starts));
}

OptimizationResult multistart_optimize(const WeightedGraph& g, const OptimizerConfig& config) {
  return multistart_optimize(ProblemInstance(g), config);
}

OptimizationResult polish_transferred(const ProblemInstance& instance, const QaoaParams& transferred,
                                      const OptimizerConfig& config) {
  config.validate();
  QaoaEvaluator eval(instance.diagonal());
  std::vector<StartRecord> starts;
  starts.push_back(run_start(eval, transferred, config));
  return reduce_starts(instance, std::move(starts));
}

OptimizationResult polish_transferred(const WeightedGraph& g, const QaoaParams& transferred,
                                      const OptimizerConfig& config) {
  return polish_transferred(ProblemInstance(g), transferred, config);
}

std::uint64_t local_optimization_count() { return g_local_runs.load(std::memory_order_relaxed); }

}  // namespace wqaoa
