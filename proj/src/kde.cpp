// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "wqaoa/error.hpp"
#include "wqaoa/rng.hpp"

namespace wqaoa {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(0, rows.front().size());
  for (const auto& r : rows) m.append_row(r);
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

void Matrix::append_row(std::span<const double> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_)
    throw DimensionError("row has " + std::to_string(r.size()) + " columns, expected " + std::to_string(cols_));
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

KdeModel::KdeModel(Matrix points, double bandwidth) : points_(std::move(points)), bandwidth_(bandwidth) {
  if (points_.rows() < 2) throw DomainError("KDE needs at least 2 training points");
  if (points_.cols() == 0 || points_.cols() % 2 != 0)
    throw DimensionError("KDE points must have 2p columns, got " + std::to_string(points_.cols()));
  for (std::size_t i = 0; i < points_.rows(); ++i)
    for (double x : points_.row(i))
      if (!std::isfinite(x)) throw DomainError("non-finite KDE training point");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw DomainError("KDE bandwidth must be positive");
}

namespace {

// Log-density of x under the kernel mixture of the selected rows.
double log_density_rows(const Matrix& pts, std::span<const std::size_t> rows, double bandwidth,
                        std::span<const double> x) {
  const std::size_t d = pts.cols();
  const double inv_two_w2 = 1.0 / (2.0 * bandwidth * bandwidth);
  double max_term = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> terms;
  terms.resize(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto r = pts.row(rows[t]);
    double ss = 0.0;
    for (std::size_t c = 0; c < d; ++c) ss += (x[c] - r[c]) * (x[c] - r[c]);
    terms[t] = -ss * inv_two_w2;
    max_term = std::max(max_term, terms[t]);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  const double log_norm = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi * bandwidth * bandwidth);
  return max_term + std::log(acc) - std::log(static_cast<double>(rows.size())) + log_norm;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

}  // namespace

double log_density(const KdeModel& model, std::span<const double> x) {
  if (x.size() != model.dimension())
    throw DimensionError("query has dimension " + std::to_string(x.size()) + ", model has " +
                         std::to_string(model.dimension()));
  const auto rows = all_rows(model.size());
  return log_density_rows(model.points(), rows, model.bandwidth(), x);
}

std::vector<double> default_bandwidth_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[i] = std::pow(10.0, -3.0 + 3.0 * i / 19.0);
  return grid;
}

BandwidthFit fit_bandwidth(const Matrix& points, std::span<const double> grid, std::uint64_t rng_seed) {
  const std::size_t n = points.rows();
  if (n < static_cast<std::size_t>(kCrossValidationFolds))
    throw DomainError("bandwidth cross-validation needs at least 5 points");
  if (grid.empty()) throw DomainError("bandwidth grid is empty");
  for (double w : grid)
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("bandwidth grid values must be positive");
  // With a single candidate nothing is being selected, so repeated points
  // are acceptable there.
  bool degenerate = grid.size() > 1;
  for (std::size_t i = 1; i < n && degenerate; ++i)
    degenerate = std::equal(points.row(i).begin(), points.row(i).end(), points.row(0).begin());
  if (degenerate) throw DomainError("all training points are identical; bandwidth is not identifiable");

  std::vector<std::size_t> perm = all_rows(n);
  Rng rng(rng_seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);

  BandwidthFit fit{grid.front(), {}};
  double best = -std::numeric_limits<double>::infinity();
  for (double w : grid) {
    double total = 0.0;
    for (int f = 0; f < kCrossValidationFolds; ++f) {
      const std::size_t lo = n * static_cast<std::size_t>(f) / kCrossValidationFolds;
      const std::size_t hi = n * static_cast<std::size_t>(f + 1) / kCrossValidationFolds;
      std::vector<std::size_t> train;
      train.reserve(n - (hi - lo));
      train.insert(train.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(lo));
      train.insert(train.end(), perm.begin() + static_cast<std::ptrdiff_t>(hi), perm.end());
      for (std::size_t t = lo; t < hi; ++t) total += log_density_rows(points, train, w, points.row(perm[t]));
    }
    const double score = total / static_cast<double>(n);
    fit.cv_scores.push_back(score);
    if (std::isfinite(score) && (score > best || (score == best && w < fit.bandwidth))) {
      best = score;
      fit.bandwidth = w;
    }
  }
  if (!std::isfinite(best)) throw NumericalError("no bandwidth gave a finite cross-validation likelihood");
  return fit;
}

KdeModel fit_kde(const Matrix& points, std::span<const double> grid, std::uint64_t rng_seed) {
  return KdeModel(points, fit_bandwidth(points, grid, rng_seed).bandwidth);
}

Matrix sample(const KdeModel& model, std::size_t count, std::uint64_t rng_seed) {
  if (count < 1) throw DomainError("sample count must be at least 1");
  Rng rng(rng_seed);
  Matrix out(count, model.dimension());
  for (std::size_t s = 0; s < count; ++s) {
    const auto src = model.points().row(rng.index(model.size()));
    auto dst = out.row(s);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = src[c] + model.bandwidth() * rng.normal();
  }
  return out;
}

KdeTransferResult kde_transfer(const KdeModel& model, const ScaledMedianTable& table, const ProblemInstance& instance,
                               int p, std::size_t k, std::uint64_t rng_seed, const TransferOptions& options) {
  if (model.depth() != p)
    throw DimensionError("KDE model has depth " + std::to_string(model.depth()) + ", requested p=" + std::to_string(p));
  const auto median = transfer_params(table, {instance.graph(), p}, options);
  QaoaEvaluator eval(instance.diagonal());
  KdeTransferResult result{median, instance.ratio(eval.value(median)), 0.0, 0, {}};
  result.median_ratio = result.ratio;
  result.candidate_ratios.push_back(result.ratio);
  if (k == 0) return result;
  const Matrix draws = sample(model, k, rng_seed);
  for (std::size_t s = 0; s < k; ++s) {
    const auto candidate = unscale_for_instance(QaoaParams::from_flat(draws.row(s)), instance.graph(), options);
    const double r = instance.ratio(eval.value(candidate));
    result.candidate_ratios.push_back(r);
    if (r > result.ratio) {
      result.ratio = r;
      result.params = candidate;
      result.chosen = s + 1;
    }
  }
  return result;
}

KdeTransferResult kde_transfer(const KdeModel& model, const ScaledMedianTable& table, const TransferInput& input,
                               std::size_t k, std::uint64_t rng_seed, const TransferOptions& options) {
  return kde_transfer(model, table, ProblemInstance(input.graph), input.p, k, rng_seed, options);
}

std::vector<double> scaled_training_row(const QaoaParams& optimized, const WeightedGraph& g,
                                        const QaoaParams& reference_scaled, const SymmetryOrbitSpec& spec,
                                        const TransferOptions& options) {
  // Canonicalize in instance units, where the orbit lattice is defined.
  const auto reference = unscale_for_instance(reference_scaled, g, options);
  auto row = canonicalize(optimized, reference, spec).flat();
  const double factor = degree_factor(average_degree(g), options) / average_abs_weight(g);
  const auto p = static_cast<std::size_t>(optimized.depth());
  for (std::size_t i = p; i < 2 * p; ++i) row[i] /= factor;
  return row;
}

}  // namespace wqaoa
