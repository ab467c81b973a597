// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "wqaoa/graph.hpp"

namespace wqaoa {

/// Largest instance the statevector pipeline accepts (2^22 amplitudes).
inline constexpr int kMaxSimulatorQubits = 22;

/// Depth-p QAOA angles in radians.
class QaoaParams {
 public:
  QaoaParams(std::vector<double> beta, std::vector<double> gamma);
  /// `flat` holds beta_1..beta_p followed by gamma_1..gamma_p.
  static QaoaParams from_flat(std::span<const double> flat);

  int depth() const noexcept { return static_cast<int>(beta_.size()); }
  const std::vector<double>& beta() const noexcept { return beta_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  std::vector<double> flat() const;

  bool operator==(const QaoaParams&) const = default;

 private:
  std::vector<double> beta_;
  std::vector<double> gamma_;
};

using Amplitude = std::complex<double>;

/// Dense n-qubit state. Index k holds the basis state in which vertex j sits
/// on side (k >> j) & 1, i.e. vertex 0 is the least significant bit.
class Statevector {
 public:
  static Statevector uniform(int n_qubits);
  static Statevector basis(int n_qubits, std::uint64_t index);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  const Amplitude& operator[](std::size_t k) const { return amps_[k]; }
  double norm() const;

 private:
  Statevector(int n, std::vector<Amplitude> amps) : n_(n), amps_(std::move(amps)) {}
  int n_;
  std::vector<Amplitude> amps_;
};

/// Spectrum of the cost Hamiltonian: values[k] is the cut value of basis
/// state k.
class DiagonalObjective {
 public:
  DiagonalObjective(int n_qubits, std::vector<double> values);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  int n_;
  std::vector<double> values_;
};

DiagonalObjective build_diagonal(const WeightedGraph& g);

/// amplitude[k] *= exp(-i * gamma * values[k]).
void apply_phase_separator(Statevector& state, const DiagonalObjective& diag, double gamma);
/// exp(-i * beta * sum_j X_j), one 2x2 rotation per qubit.
void apply_mixer(Statevector& state, double beta);

/// Layers run l = 1..p, each applying the phase separator e^{-i gamma_l C}
/// and then the mixer e^{-i beta_l B}, starting from |+>^n.
Statevector qaoa_state(const DiagonalObjective& diag, const QaoaParams& params);
Statevector qaoa_state(const WeightedGraph& g, const QaoaParams& params);

double expectation(const Statevector& state, const DiagonalObjective& diag);

/// Reusable evaluator for one instance.
///
/// MaxCut costs and the mixer both commute with the global bit flip X^n and
/// |+>^n is invariant under it, so every QAOA state satisfies
/// psi[k] = psi[~k]. The evaluator stores only the half with vertex n-1 on
/// side 0. Not thread-safe; use one per worker.
class QaoaEvaluator {
 public:
  explicit QaoaEvaluator(std::shared_ptr<const DiagonalObjective> diag);
  explicit QaoaEvaluator(const WeightedGraph& g);

  int n_qubits() const noexcept { return n_; }
  const DiagonalObjective& diagonal() const noexcept { return *diag_; }

  double value(const QaoaParams& params);
  /// Returns <C> and writes d<C>/d(beta_1..beta_p, gamma_1..gamma_p) into
  /// `grad` using one forward and one reverse sweep.
  double value_and_gradient(const QaoaParams& params, std::span<double> grad);

 private:
  void forward(const QaoaParams& params, bool keep_phases);

  std::shared_ptr<const DiagonalObjective> diag_;
  int n_;
  std::size_t half_;
  std::vector<Amplitude> psi_;
  std::vector<Amplitude> lambda_;
  // cos / sin of gamma_l * C, one block of half_ entries per layer
  std::vector<double> phase_cos_;
  std::vector<double> phase_sin_;
};

/// Graph together with its diagonal and cached cut extrema.
class ProblemInstance {
 public:
  explicit ProblemInstance(WeightedGraph g);

  const WeightedGraph& graph() const noexcept { return graph_; }
  std::shared_ptr<const DiagonalObjective> diagonal() const noexcept { return diag_; }
  double c_min() const noexcept { return c_min_; }
  double c_max() const noexcept { return c_max_; }
  const CutAssignment& argmax() const noexcept { return argmax_; }

  /// (e - c_min) / (c_max - c_min). Throws DomainError when all cuts are equal.
  double ratio(double expectation_value) const;
  double approximation_ratio(const QaoaParams& params) const;
  double expectation(const QaoaParams& params) const;

 private:
  WeightedGraph graph_;
  std::shared_ptr<const DiagonalObjective> diag_;
  double c_min_;
  double c_max_;
  CutAssignment argmax_;
};

double approximation_ratio(const WeightedGraph& g, const QaoaParams& params);

bool has_triangle(const WeightedGraph& g);

/// Closed-form depth-1 expectation for triangle-free graphs.
double analytic_p1_triangle_free(const WeightedGraph& g, double beta1, double gamma1);

struct GridAxis {
  double lo;
  double hi;
  int points;

  double at(int i) const { return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1); }
};

struct Landscape {
  GridAxis beta;
  GridAxis gamma;
  /// Row-major: ratios[i * gamma.points + j] is r(beta_i, gamma_j).
  std::vector<double> ratios;

  double at(int i, int j) const { return ratios[static_cast<std::size_t>(i) * gamma.points + j]; }
};

Landscape landscape_scan(const WeightedGraph& g, const GridAxis& beta, const GridAxis& gamma);

/// First row: "beta\gamma" then gamma coordinates; one row per beta value.
void write_landscape_csv(std::ostream& out, const Landscape& scan);

}  // namespace wqaoa
