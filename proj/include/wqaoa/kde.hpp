// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wqaoa/analysis.hpp"
#include "wqaoa/graph.hpp"
#include "wqaoa/simulator.hpp"
#include "wqaoa/transfer.hpp"

namespace wqaoa {

/// Dense row-major matrix of parameter vectors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::vector<std::vector<double>> to_rows() const;
  void append_row(std::span<const double> r);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Isotropic Gaussian KDE over scaled parameter vectors. Columns are
/// beta_1..beta_p, gamma_1..gamma_p in radians, with gamma divided by the
/// degree factor of the source graph.
class KdeModel {
 public:
  KdeModel(Matrix points, double bandwidth);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dimension() const noexcept { return points_.cols(); }
  int depth() const noexcept { return static_cast<int>(points_.cols() / 2); }
  const Matrix& points() const noexcept { return points_; }
  double bandwidth() const noexcept { return bandwidth_; }

 private:
  Matrix points_;
  double bandwidth_;
};

/// log of (1/N) sum_i (2 pi w^2)^(-d/2) exp(-|x - x_i|^2 / (2 w^2)).
double log_density(const KdeModel& model, std::span<const double> x);

/// 20 log-spaced values on [1e-3, 1].
std::vector<double> default_bandwidth_grid();

struct BandwidthFit {
  double bandwidth;
  /// Mean held-out log-likelihood per point, one entry per grid value.
  std::vector<double> cv_scores;
};

inline constexpr int kCrossValidationFolds = 5;

/// 5-fold cross-validated grid search. Points are shuffled with `rng_seed`
/// and split into contiguous folds; ties go to the smaller bandwidth.
BandwidthFit fit_bandwidth(const Matrix& points, std::span<const double> grid, std::uint64_t rng_seed = 0);

KdeModel fit_kde(const Matrix& points, std::span<const double> grid, std::uint64_t rng_seed = 0);

/// Each row is a uniformly chosen training point plus N(0, w^2 I) noise.
Matrix sample(const KdeModel& model, std::size_t count, std::uint64_t rng_seed);

struct KdeTransferResult {
  QaoaParams params;
  double ratio;
  double median_ratio;
  /// 0 for the median parameters, k for the k-th sample.
  std::size_t chosen;
  std::vector<double> candidate_ratios;
};

/// Evaluates the transferred median plus `k` rescaled KDE samples on the
/// instance and keeps the best (the median wins ties).
KdeTransferResult kde_transfer(const KdeModel& model, const ScaledMedianTable& table, const ProblemInstance& instance,
                               int p, std::size_t k, std::uint64_t rng_seed, const TransferOptions& options = {});
KdeTransferResult kde_transfer(const KdeModel& model, const ScaledMedianTable& table, const TransferInput& input,
                               std::size_t k, std::uint64_t rng_seed, const TransferOptions& options = {});

/// Training row for an optimized instance: the symmetry-orbit member closest
/// to `reference_scaled` (compared in instance units), with gamma then
/// divided by the degree factor of `g`.
std::vector<double> scaled_training_row(const QaoaParams& optimized, const WeightedGraph& g,
                                        const QaoaParams& reference_scaled, const SymmetryOrbitSpec& spec = {},
                                        const TransferOptions& options = {});

}  // namespace wqaoa
