// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/simulator.hpp"

#include "phase_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "wqaoa/error.hpp"

namespace wqaoa {

QaoaParams::QaoaParams(std::vector<double> beta, std::vector<double> gamma)
    : beta_(std::move(beta)), gamma_(std::move(gamma)) {
  if (beta_.empty()) throw DomainError("QAOA depth must be at least 1");
  if (beta_.size() != gamma_.size())
    throw DimensionError("beta has " + std::to_string(beta_.size()) + " entries, gamma has " +
                         std::to_string(gamma_.size()));
  for (double x : beta_)
    if (!std::isfinite(x)) throw DomainError("non-finite beta");
  for (double x : gamma_)
    if (!std::isfinite(x)) throw DomainError("non-finite gamma");
}

QaoaParams QaoaParams::from_flat(std::span<const double> flat) {
  if (flat.empty() || flat.size() % 2 != 0)
    throw DimensionError("flat parameter vector must have even length 2p, got " + std::to_string(flat.size()));
  const std::size_t p = flat.size() / 2;
  return QaoaParams({flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(p)},
                    {flat.begin() + static_cast<std::ptrdiff_t>(p), flat.end()});
}

std::vector<double> QaoaParams::flat() const {
  std::vector<double> out(beta_);
  out.insert(out.end(), gamma_.begin(), gamma_.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_qubits(int n) {
  if (n < 1) throw DomainError("need at least one qubit");
  if (n > kMaxSimulatorQubits)
    throw ResourceError("statevector simulation limited to " + std::to_string(kMaxSimulatorQubits) +
                        " qubits, instance has " + std::to_string(n));
}

// -i * s * b
inline Amplitude mul_minus_i(double s, const Amplitude& b) { return {s * b.imag(), -s * b.real()}; }

inline void rotate_pair(Amplitude& a, Amplitude& b, double c, double s) {
  const Amplitude a0 = a;
  const Amplitude b0 = b;
  const Amplitude ta = mul_minus_i(s, b0);
  const Amplitude tb = mul_minus_i(s, a0);
  a = {c * a0.real() + ta.real(), c * a0.imag() + ta.imag()};
  b = {c * b0.real() + tb.real(), c * b0.imag() + tb.imag()};
}

inline Amplitude mul(const Amplitude& x, const Amplitude& y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

inline Amplitude mul_conj(const Amplitude& x, const Amplitude& y) {
  // x * conj(y)
  return {x.real() * y.real() + x.imag() * y.imag(), x.imag() * y.real() - x.real() * y.imag()};
}

// Im(conj(l) * f)
inline double im_conj_dot(const Amplitude& l, const Amplitude& f) {
  return l.real() * f.imag() - l.imag() * f.real();
}

// Mixer on qubits 0..n-2 of a length-2^(n-1) array plus the top qubit, whose
// partner of k is k ^ (2^(n-1) - 1) under the flip symmetry.
void mixer_reduced(std::span<Amplitude> amps, int n, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t half = amps.size();
  for (int q = 0; q < n - 1; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < half; base += 2 * stride)
      for (std::size_t k = base; k < base + stride; ++k) rotate_pair(amps[k], amps[k + stride], c, s);
  }
  if (n == 1) {
    amps[0] = mul(amps[0], Amplitude{c, -s});
    return;
  }
  const std::size_t low = half - 1;
  for (std::size_t k = 0; k < half / 2; ++k) rotate_pair(amps[k], amps[k ^ low], c, s);
}

// Applies exp(-i beta B) to both reduced arrays and returns Im <l| B |f>.
// Each X_q commutes with the rotations, so its matrix element can be read
// off a pair just before that pair is rotated.
double mixer_reduced_with_element(std::span<Amplitude> l, std::span<Amplitude> f, int n, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t half = l.size();
  double acc = 0.0;
  for (int q = 0; q < n - 1; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < half; base += 2 * stride)
      for (std::size_t k = base; k < base + stride; ++k) {
        acc += im_conj_dot(l[k], f[k + stride]) + im_conj_dot(l[k + stride], f[k]);
        rotate_pair(l[k], l[k + stride], c, s);
        rotate_pair(f[k], f[k + stride], c, s);
      }
  }
  if (n == 1) {
    acc += im_conj_dot(l[0], f[0]);
    l[0] = mul(l[0], Amplitude{c, -s});
    f[0] = mul(f[0], Amplitude{c, -s});
    return acc;
  }
  const std::size_t low = half - 1;
  for (std::size_t k = 0; k < half / 2; ++k) {
    acc += im_conj_dot(l[k], f[k ^ low]) + im_conj_dot(l[k ^ low], f[k]);
    rotate_pair(l[k], l[k ^ low], c, s);
    rotate_pair(f[k], f[k ^ low], c, s);
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

Statevector Statevector::uniform(int n_qubits) {
  check_qubits(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  return Statevector(n_qubits, std::vector<Amplitude>(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

Statevector Statevector::basis(int n_qubits, std::uint64_t index) {
  check_qubits(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw DimensionError("basis index out of range");
  std::vector<Amplitude> amps(dim);
  amps[index] = 1.0;
  return Statevector(n_qubits, std::move(amps));
}

double Statevector::norm() const {
  double ss = 0.0;
  for (const auto& a : amps_) ss += std::norm(a);
  return std::sqrt(ss);
}

DiagonalObjective::DiagonalObjective(int n_qubits, std::vector<double> values) : n_(n_qubits), values_(std::move(values)) {
  check_qubits(n_);
  if (values_.size() != (std::size_t{1} << n_)) throw DimensionError("diagonal length must be 2^n");
}

DiagonalObjective build_diagonal(const WeightedGraph& g) {
  const int n = g.n_vertices();
  check_qubits(n);
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t half = dim / 2;
  const auto adj = g.adjacency();
  std::vector<double> values(dim, 0.0);
  // Gray-code walk over the lower half, then mirror: values[k] = values[~k]
  // holds bit-exactly.
  std::uint64_t bits = 0;
  double value = 0.0;
  for (std::size_t t = 1; t < half; ++t) {
    const int j = std::countr_zero(t);
    const bool side = (bits >> j) & 1U;
    for (const auto& [l, w] : adj[j]) value += (side == (((bits >> l) & 1U) != 0)) ? w : -w;
    bits ^= std::uint64_t{1} << j;
    values[bits] = value;
  }
  for (std::size_t k = 0; k < half; ++k) values[(dim - 1) ^ k] = values[k];
  return DiagonalObjective(n, std::move(values));
}

void apply_phase_separator(Statevector& state, const DiagonalObjective& diag, double gamma) {
  if (state.size() != diag.size()) throw DimensionError("state and diagonal dimensions differ");
  auto amps = state.amplitudes();
  const auto v = diag.values();
  for (std::size_t k = 0; k < amps.size(); ++k)
    amps[k] = mul(amps[k], Amplitude{std::cos(gamma * v[k]), -std::sin(gamma * v[k])});
}

void apply_mixer(Statevector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  auto amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (int q = 0; q < state.n_qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride)
      for (std::size_t k = base; k < base + stride; ++k) rotate_pair(amps[k], amps[k + stride], c, s);
  }
}

Statevector qaoa_state(const DiagonalObjective& diag, const QaoaParams& params) {
  auto state = Statevector::uniform(diag.n_qubits());
  for (int l = 0; l < params.depth(); ++l) {
    apply_phase_separator(state, diag, params.gamma()[l]);
    apply_mixer(state, params.beta()[l]);
  }
  return state;
}

Statevector qaoa_state(const WeightedGraph& g, const QaoaParams& params) {
  return qaoa_state(build_diagonal(g), params);
}

double expectation(const Statevector& state, const DiagonalObjective& diag) {
  if (state.size() != diag.size()) throw DimensionError("state and diagonal dimensions differ");
  const auto amps = state.amplitudes();
  const auto v = diag.values();
  double e = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k) e += std::norm(amps[k]) * v[k];
  return e;
}

// ---------------------------------------------------------------------------

QaoaEvaluator::QaoaEvaluator(std::shared_ptr<const DiagonalObjective> diag)
    : diag_(std::move(diag)), n_(diag_->n_qubits()), half_(diag_->size() / 2), psi_(half_), lambda_(half_) {}

QaoaEvaluator::QaoaEvaluator(const WeightedGraph& g)
    : QaoaEvaluator(std::make_shared<const DiagonalObjective>(build_diagonal(g))) {}

void QaoaEvaluator::forward(const QaoaParams& params, bool keep_phases) {
  const auto v = diag_->values().first(half_);
  const int p = params.depth();
  const std::size_t blocks = keep_phases ? static_cast<std::size_t>(p) : 1;
  phase_cos_.resize(blocks * half_);
  phase_sin_.resize(blocks * half_);
  std::fill(psi_.begin(), psi_.end(), Amplitude(1.0 / std::sqrt(2.0 * static_cast<double>(half_)), 0.0));
  for (int l = 0; l < p; ++l) {
    const std::size_t off = keep_phases ? static_cast<std::size_t>(l) * half_ : 0;
    const std::span<double> c(phase_cos_.data() + off, half_);
    const std::span<double> s(phase_sin_.data() + off, half_);
    detail::phase_tables(params.gamma()[l], v, c, s);
    for (std::size_t k = 0; k < half_; ++k) psi_[k] = mul(psi_[k], Amplitude{c[k], -s[k]});
    mixer_reduced(psi_, n_, params.beta()[l]);
  }
}

double QaoaEvaluator::value(const QaoaParams& params) {
  forward(params, false);
  const auto v = diag_->values();
  double e = 0.0;
  for (std::size_t k = 0; k < half_; ++k) e += std::norm(psi_[k]) * v[k];
  return 2.0 * e;
}

double QaoaEvaluator::value_and_gradient(const QaoaParams& params, std::span<double> grad) {
  const int p = params.depth();
  if (grad.size() != static_cast<std::size_t>(2 * p))
    throw DimensionError("gradient buffer must have 2p = " + std::to_string(2 * p) + " entries");
  forward(params, true);
  const auto v = diag_->values();
  double e = 0.0;
  for (std::size_t k = 0; k < half_; ++k) {
    e += std::norm(psi_[k]) * v[k];
    lambda_[k] = v[k] * psi_[k];
  }
  // Reverse sweep: for a gate exp(-i theta G) with phi the state just after
  // it and lambda the back-propagated C|psi>, d<C>/d theta = 2 Im <lambda|G|phi>.
  // Every reduced inner product carries a factor 2 for the mirrored half.
  for (int l = p - 1; l >= 0; --l) {
    grad[static_cast<std::size_t>(l)] = 4.0 * mixer_reduced_with_element(lambda_, psi_, n_, -params.beta()[l]);
    const double* c = phase_cos_.data() + static_cast<std::size_t>(l) * half_;
    const double* s = phase_sin_.data() + static_cast<std::size_t>(l) * half_;
    double acc = 0.0;
    for (std::size_t k = 0; k < half_; ++k) {
      acc += v[k] * im_conj_dot(lambda_[k], psi_[k]);
      const Amplitude ph{c[k], -s[k]};
      psi_[k] = mul_conj(psi_[k], ph);
      lambda_[k] = mul_conj(lambda_[k], ph);
    }
    grad[static_cast<std::size_t>(p + l)] = 4.0 * acc;
  }
  return 2.0 * e;
}

// ---------------------------------------------------------------------------

ProblemInstance::ProblemInstance(WeightedGraph g)
    : graph_(std::move(g)), diag_(std::make_shared<const DiagonalObjective>(build_diagonal(graph_))) {
  auto extrema = brute_force_extrema(graph_);
  c_min_ = extrema.c_min;
  c_max_ = extrema.c_max;
  argmax_ = std::move(extrema.argmax);
}

double ProblemInstance::ratio(double expectation_value) const {
  if (!(c_max_ > c_min_)) throw DomainError("degenerate instance: every cut has the same value");
  return (expectation_value - c_min_) / (c_max_ - c_min_);
}

double ProblemInstance::expectation(const QaoaParams& params) const {
  QaoaEvaluator eval(diag_);
  return eval.value(params);
}

double ProblemInstance::approximation_ratio(const QaoaParams& params) const { return ratio(expectation(params)); }

double approximation_ratio(const WeightedGraph& g, const QaoaParams& params) {
  return ProblemInstance(g).approximation_ratio(params);
}

bool has_triangle(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.n_vertices());
  std::vector<std::uint8_t> adj(n * n, 0);
  for (const auto& e : g.edges()) adj[e.u * n + e.v] = adj[e.v * n + e.u] = 1;
  for (const auto& e : g.edges())
    for (std::size_t k = 0; k < n; ++k)
      if (adj[e.u * n + k] && adj[e.v * n + k]) return true;
  return false;
}

double analytic_p1_triangle_free(const WeightedGraph& g, double beta1, double gamma1) {
  if (has_triangle(g)) throw DomainError("closed-form depth-1 expectation requires a triangle-free graph");
  const auto adj = g.adjacency();
  auto neighborhood_product = [&](int a, int excluded) {
    double prod = 1.0;
    for (const auto& [b, w] : adj[a])
      if (b != excluded) prod *= std::cos(w * gamma1);
    return prod;
  };
  double sum = 0.0;
  for (const auto& e : g.edges())
    sum += e.weight * std::sin(e.weight * gamma1) * (neighborhood_product(e.u, e.v) + neighborhood_product(e.v, e.u));
  return g.total_weight() / 2.0 + std::sin(4.0 * beta1) / 4.0 * sum;
}

Landscape landscape_scan(const WeightedGraph& g, const GridAxis& beta, const GridAxis& gamma) {
  if (beta.points < 2 || gamma.points < 2) throw DomainError("landscape resolution must be at least 2 per axis");
  const ProblemInstance inst(g);
  QaoaEvaluator eval(inst.diagonal());
  Landscape scan{beta, gamma, {}};
  scan.ratios.reserve(static_cast<std::size_t>(beta.points) * gamma.points);
  for (int i = 0; i < beta.points; ++i)
    for (int j = 0; j < gamma.points; ++j)
      scan.ratios.push_back(inst.ratio(eval.value(QaoaParams({beta.at(i)}, {gamma.at(j)}))));
  return scan;
}

void write_landscape_csv(std::ostream& out, const Landscape& scan) {
  char buf[40];
  out << "beta\\gamma";
  for (int j = 0; j < scan.gamma.points; ++j) {
    std::snprintf(buf, sizeof buf, ",%.17g", scan.gamma.at(j));
    out << buf;
  }
  out << '\n';
  for (int i = 0; i < scan.beta.points; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", scan.beta.at(i));
    out << buf;
    for (int j = 0; j < scan.gamma.points; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", scan.at(i, j));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace wqaoa
