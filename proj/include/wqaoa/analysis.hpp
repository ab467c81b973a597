// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wqaoa/simulator.hpp"

namespace wqaoa {

/// Parameter symmetries of MaxCut QAOA: independent shifts of each beta
/// component by multiples of `shift_quantum`, optionally combined with time
/// reversal (beta, gamma) -> (-beta, -gamma).
struct SymmetryOrbitSpec {
  double shift_quantum = std::numbers::pi / 2.0;
  /// Period of the objective in each gamma component, or 0 when there is
  /// none. Integer-weight graphs have period 2 pi.
  double gamma_shift_quantum = 0.0;
  bool include_time_reversal = true;
  /// Shifts enumerated by symmetry_orbit, in quanta on each side.
  int shift_window = 4;

  void validate() const;
};

inline constexpr std::size_t kMaxOrbitSize = 1'000'000;

/// Period of the objective in each gamma component when every cut value is
/// an integer: 2 pi / gcd of the differences between cut values. Returns 0
/// for non-integer spectra and for constant ones.
double gamma_period(const DiagonalObjective& diag);

/// The identity is always the first member.
std::vector<QaoaParams> symmetry_orbit(const QaoaParams& params, const SymmetryOrbitSpec& spec = {});

struct ParamDistance {
  double d_beta;
  double d_gamma;
  double d_total;
};

/// Member of the full (unbounded) orbit of `opt` closest to `reference` in
/// beta (ties: gamma, then lexicographic order). Only `opt` is expanded.
QaoaParams canonicalize(const QaoaParams& opt, const QaoaParams& reference, const SymmetryOrbitSpec& spec = {});

ParamDistance canonical_distance(const QaoaParams& opt, const QaoaParams& transferred,
                                 const SymmetryOrbitSpec& spec = {});

// Aggregate statistics --------------------------------------------------------

inline constexpr double kRecoveryTolerance = 1e-7;
inline constexpr double kParameterMatchTolerance = 1e-4;

struct InstanceRecord {
  std::string graph_id;
  double weight_std = 0.0;
  double r_transferred = 0.0;
  std::optional<double> r_kde;
  std::optional<double> r_polished;
  std::optional<double> r_optimized;
  /// Canonical distance between polished and optimized parameters, when both
  /// are known.
  std::optional<double> polished_param_distance;
};

struct Quartiles {
  double q1;
  double median;
  double q3;
};

/// Linear-interpolation quantiles of a nonempty sample.
Quartiles quartiles(std::vector<double> values);

struct GapStatistics {
  std::size_t count = 0;
  Quartiles r_transferred{};
  std::optional<Quartiles> r_kde;
  std::optional<Quartiles> r_polished;
  std::optional<Quartiles> r_optimized;
  /// (r_optimized - r_transferred) * 100 over records with both.
  std::optional<double> median_gap_pp;
  std::optional<std::pair<double, double>> iqr;
  std::optional<double> kde_median_gap_pp;
  /// Fraction with |r_polished - r_optimized| <= 1e-7.
  std::optional<double> recovery_rate;
  /// Fraction with polished parameters within 1e-4 of optimized ones.
  std::optional<double> parameter_match_rate;
  std::vector<InstanceRecord> per_instance;
};

GapStatistics aggregate(std::span<const InstanceRecord> records);

double gap_pp(double r_high, double r_low);
bool recovered(double r_polished, double r_optimized);

struct StdGapRow {
  std::string graph_id;
  double weight_std;
  /// (r_transferred - r_optimized) * 100, usually <= 0.
  double gap_pp;
};

struct StdGapTable {
  std::vector<StdGapRow> rows;
  /// Spearman rank correlation; absent for fewer than two rows or constant
  /// columns.
  std::optional<double> rank_correlation;
};

StdGapTable weight_std_vs_gap(std::span<const InstanceRecord> records);

/// Spearman correlation with average ranks for ties.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace wqaoa
