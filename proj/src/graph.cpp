// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "wqaoa/error.hpp"
#include "wqaoa/rng.hpp"

namespace wqaoa {

WeightedGraph::WeightedGraph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices), edges_(std::move(edges)) {
  if (n_ < 1) throw DomainError("graph must have at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_)
      throw DomainError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for " +
                        std::to_string(n_) + " vertices");
    if (e.u == e.v) throw DomainError("self-loop on vertex " + std::to_string(e.u));
    if (!std::isfinite(e.weight)) throw DomainError("non-finite edge weight");
    if (e.weight == 0.0)
      throw DomainError("zero weight on edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    if (!seen.emplace(e.u, e.v).second)
      throw DomainError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
  }
}

std::vector<double> WeightedGraph::weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const auto& e : edges_) w.push_back(e.weight);
  return w;
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  if (!std::isfinite(factor) || factor == 0.0) throw DomainError("scale factor must be finite and nonzero");
  auto edges = edges_;
  for (auto& e : edges) e.weight *= factor;
  return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size())
    throw DimensionError("expected " + std::to_string(edges_.size()) + " weights, got " +
                         std::to_string(weights.size()));
  auto edges = edges_;
  for (std::size_t k = 0; k < edges.size(); ++k) edges[k].weight = weights[k];
  return WeightedGraph(n_, std::move(edges));
}

std::vector<std::vector<std::pair<int, double>>> WeightedGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n_));
  for (const auto& e : edges_) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  return adj;
}

// ---------------------------------------------------------------------------

CutAssignment::CutAssignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

CutAssignment CutAssignment::from_index(std::uint64_t index, int n) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) bits[j] = static_cast<std::uint8_t>((index >> j) & 1U);
  return CutAssignment(std::move(bits));
}

CutAssignment CutAssignment::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != '0' && text[k] != '1') throw ParseError("cut assignment must contain only 0 and 1", k);
    bits.push_back(text[k] == '1' ? 1 : 0);
  }
  return CutAssignment(std::move(bits));
}

CutAssignment CutAssignment::complement() const {
  auto bits = bits_;
  for (auto& b : bits) b ^= 1U;
  return CutAssignment(std::move(bits));
}

std::uint64_t CutAssignment::to_index() const {
  if (bits_.size() > 64) throw ResourceError("assignment too long for a 64-bit index");
  std::uint64_t k = 0;
  for (std::size_t j = 0; j < bits_.size(); ++j) k |= static_cast<std::uint64_t>(bits_[j]) << j;
  return k;
}

std::string CutAssignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

double cut_value(const WeightedGraph& g, const CutAssignment& z) {
  if (z.size() != static_cast<std::size_t>(g.n_vertices()))
    throw DimensionError("assignment has " + std::to_string(z.size()) + " bits, graph has " +
                         std::to_string(g.n_vertices()) + " vertices");
  double value = 0.0;
  for (const auto& e : g.edges())
    if (z[e.u] != z[e.v]) value += e.weight;
  return value;
}

CutExtrema brute_force_extrema(const WeightedGraph& g) {
  const int n = g.n_vertices();
  if (n > kMaxBruteForceVertices)
    throw ResourceError("brute-force enumeration limited to " + std::to_string(kMaxBruteForceVertices) +
                        " vertices, graph has " + std::to_string(n));
  const auto adj = g.adjacency();
  // Cut values are invariant under complementing z, so vertex n-1 stays on
  // side 0 and a Gray-code walk covers the remaining 2^(n-1) assignments.
  const int free_bits = n - 1;
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  std::uint64_t bits = 0;
  double value = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  std::uint64_t argmax = 0;
  for (std::uint64_t t = 1; t < steps; ++t) {
    const int j = std::countr_zero(t);
    const bool side = (bits >> j) & 1U;
    for (const auto& [l, w] : adj[j]) {
      const bool other = (bits >> l) & 1U;
      value += (side == other) ? w : -w;
    }
    bits ^= std::uint64_t{1} << j;
    if (value < c_min) c_min = value;
    if (value > c_max) {
      c_max = value;
      argmax = bits;
    }
  }
  return {c_min, c_max, CutAssignment::from_index(argmax, n)};
}

double average_abs_weight(const WeightedGraph& g) {
  if (g.num_edges() == 0) throw DomainError("average absolute weight undefined for an edgeless graph");
  double total = 0.0;
  for (const auto& e : g.edges()) total += std::abs(e.weight);
  return total / static_cast<double>(g.num_edges());
}

double average_degree(const WeightedGraph& g) {
  return 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.n_vertices());
}

double weight_std(const WeightedGraph& g) {
  if (g.num_edges() == 0) throw DomainError("weight standard deviation undefined for an edgeless graph");
  const double mean = g.total_weight() / static_cast<double>(g.num_edges());
  double ss = 0.0;
  for (const auto& e : g.edges()) ss += (e.weight - mean) * (e.weight - mean);
  return std::sqrt(ss / static_cast<double>(g.num_edges()));
}

WeightedGraph rescale_to_unit_mean(const WeightedGraph& g) { return g.scaled(1.0 / average_abs_weight(g)); }

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double draw_once(const WeightDistribution& dist, Rng& rng) {
  // Each branch draws from the untruncated parent law; acceptance happens in
  // the caller.
  return std::visit(
      Overloaded{
          [&](const UniformPositive& d) { return d.b * rng.uniform(); },
          [&](const UniformSymmetric& d) { return rng.uniform(-d.b, d.b); },
          [&](const Exponential& d) { return -std::log1p(-rng.uniform()) / d.alpha; },
          [&](const TruncatedCauchy&) { return std::tan(std::numbers::pi * (rng.uniform() - 0.5)); },
      },
      dist);
}

bool accept(const WeightDistribution& dist, double w) {
  if (w == 0.0 || !std::isfinite(w)) return false;
  return std::visit(Overloaded{
                        [&](const UniformPositive& d) { return w > 0.0 && w < d.b; },
                        [&](const UniformSymmetric& d) { return std::abs(w) < d.b; },
                        [&](const Exponential& d) { return w > 0.0 && w <= 16.0 / d.alpha; },
                        [&](const TruncatedCauchy& d) { return std::abs(w) <= d.bound; },
                    },
                    dist);
}

}  // namespace

std::string distribution_name(const WeightDistribution& dist) {
  return std::visit(Overloaded{
                        [](const UniformPositive&) { return std::string("uniform_positive"); },
                        [](const UniformSymmetric&) { return std::string("uniform_symmetric"); },
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const TruncatedCauchy&) { return std::string("truncated_cauchy"); },
                    },
                    dist);
}

double distribution_parameter(const WeightDistribution& dist) {
  return std::visit(Overloaded{
                        [](const UniformPositive& d) { return d.b; },
                        [](const UniformSymmetric& d) { return d.b; },
                        [](const Exponential& d) { return d.alpha; },
                        [](const TruncatedCauchy& d) { return d.bound; },
                    },
                    dist);
}

WeightDistribution make_distribution(std::string_view name, double parameter) {
  WeightDistribution dist;
  if (name == "uniform_positive")
    dist = UniformPositive{parameter};
  else if (name == "uniform_symmetric")
    dist = UniformSymmetric{parameter};
  else if (name == "exponential")
    dist = Exponential{parameter};
  else if (name == "truncated_cauchy")
    dist = TruncatedCauchy{parameter};
  else
    throw DomainError("unknown weight distribution '" + std::string(name) + "'");
  validate(dist);
  return dist;
}

void validate(const WeightDistribution& dist) {
  const double param = distribution_parameter(dist);
  if (!(param > 0.0) || !std::isfinite(param))
    throw DomainError(distribution_name(dist) + " parameter must be finite and positive");
}

std::vector<double> sample_weights(const WeightDistribution& dist, std::size_t count, std::uint64_t rng_seed) {
  validate(dist);
  if (count < 1) throw DomainError("sample count must be at least 1");
  Rng rng(rng_seed);
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    const double w = draw_once(dist, rng);
    if (accept(dist, w)) out.push_back(w);
  }
  return out;
}

WeightedGraph erdos_renyi(int n, double edge_prob, std::uint64_t rng_seed) {
  if (n < 2) throw DomainError("Erdos-Renyi graphs need at least 2 vertices");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw DomainError("edge probability must lie in (0, 1]");
  constexpr int kMaxAttempts = 1000;
  const Rng root(rng_seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < edge_prob) edges.push_back({i, j, 1.0});
    if (!edges.empty()) return WeightedGraph(n, std::move(edges));
  }
  throw GenerationError("no edges after " + std::to_string(kMaxAttempts) + " Erdos-Renyi draws");
}

WeightedGraph assign_weights(const WeightedGraph& g, const WeightDistribution& dist, std::uint64_t rng_seed) {
  if (g.num_edges() == 0) return g;
  const auto w = sample_weights(dist, g.num_edges(), rng_seed);
  return g.with_weights(w);
}

}  // namespace wqaoa
