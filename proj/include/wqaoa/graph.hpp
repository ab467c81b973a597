// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wqaoa {

struct Edge {
  int u;
  int v;
  double weight;

  bool operator==(const Edge&) const = default;
};

/// An undirected weighted MaxCut instance.
///
/// Edges are stored with u < v in insertion order. Construction rejects
/// self-loops, duplicate pairs, out-of-range endpoints, and weights that are
/// zero or non-finite. Connectivity is not required.
class WeightedGraph {
 public:
  WeightedGraph(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::vector<double> weights() const;
  double total_weight() const;
  /// Same topology with every weight multiplied by `factor` (finite, nonzero).
  WeightedGraph scaled(double factor) const;
  /// Same topology with the given weights, in edge order.
  WeightedGraph with_weights(std::span<const double> weights) const;
  /// adjacency()[i] lists (neighbor, weight) pairs.
  std::vector<std::vector<std::pair<int, double>>> adjacency() const;

  bool operator==(const WeightedGraph&) const = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// Binary assignment z; bit j is the side of vertex j.
class CutAssignment {
 public:
  CutAssignment() = default;
  explicit CutAssignment(std::vector<std::uint8_t> bits);
  /// Vertex j takes bit j of `index` (vertex 0 is the least significant bit).
  static CutAssignment from_index(std::uint64_t index, int n);
  /// Character j of `text` ('0' or '1') is the side of vertex j.
  static CutAssignment from_string(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t j) const { return bits_[j] != 0; }
  CutAssignment complement() const;
  std::uint64_t to_index() const;
  std::string to_string() const;

  bool operator==(const CutAssignment&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

double cut_value(const WeightedGraph& g, const CutAssignment& z);

struct CutExtrema {
  double c_min;
  double c_max;
  CutAssignment argmax;
};

inline constexpr int kMaxBruteForceVertices = 30;

/// Exact minimum and maximum cut over all 2^n assignments.
CutExtrema brute_force_extrema(const WeightedGraph& g);

double average_abs_weight(const WeightedGraph& g);
double average_degree(const WeightedGraph& g);
/// Population standard deviation of the edge weights (0 for a single edge).
double weight_std(const WeightedGraph& g);
WeightedGraph rescale_to_unit_mean(const WeightedGraph& g);

// Weight distributions.
struct UniformPositive { double b = 1.0; };
struct UniformSymmetric { double b = 1.0; };
struct Exponential { double alpha = 1.0; };
struct TruncatedCauchy { double bound = 1000.0; };

using WeightDistribution = std::variant<UniformPositive, UniformSymmetric, Exponential, TruncatedCauchy>;

std::string distribution_name(const WeightDistribution& dist);
/// Accepts "uniform_positive", "uniform_symmetric", "exponential",
/// "truncated_cauchy" with the given shape parameter.
WeightDistribution make_distribution(std::string_view name, double parameter);
double distribution_parameter(const WeightDistribution& dist);
void validate(const WeightDistribution& dist);

/// i.i.d. nonzero samples by rejection from the parent law.
std::vector<double> sample_weights(const WeightDistribution& dist, std::size_t count, std::uint64_t rng_seed);

/// G(n, p) with unit weights. Edgeless draws are regenerated.
WeightedGraph erdos_renyi(int n, double edge_prob, std::uint64_t rng_seed);

/// Draws one weight per edge of `g` from `dist`.
WeightedGraph assign_weights(const WeightedGraph& g, const WeightDistribution& dist, std::uint64_t rng_seed);

}  // namespace wqaoa
