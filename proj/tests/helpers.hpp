// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "wqaoa/graph.hpp"
#include "wqaoa/rng.hpp"
#include "wqaoa/simulator.hpp"

namespace testing {

using wqaoa::Edge;
using wqaoa::WeightedGraph;
inline constexpr double kPi = std::numbers::pi;

inline WeightedGraph fig2_graph() {
  return WeightedGraph(4, {{0, 1, 0.94}, {1, 2, -0.53}, {2, 3, -2.17}, {3, 0, 0.36}});
}

inline WeightedGraph k2(double w = 1.0) { return WeightedGraph(2, {{0, 1, w}}); }

inline WeightedGraph cycle(int n, double w = 1.0) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, w});
  return WeightedGraph(n, e);
}

inline WeightedGraph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return WeightedGraph(n, e);
}

/// Random graph with at least one edge and weights uniform on +-[0.1, 2].
inline WeightedGraph random_weighted(int n, double p, std::uint64_t seed) {
  wqaoa::Rng rng(seed);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.push_back({i, j, (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 2.0)});
  if (e.empty()) e.push_back({0, 1, 1.0});
  return WeightedGraph(n, e);
}

inline wqaoa::QaoaParams random_params(int p, wqaoa::Rng& rng) {
  std::vector<double> b(p), g(p);
  for (auto& x : b) x = rng.uniform(-kPi / 2, kPi / 2);
  for (auto& x : g) x = rng.uniform(-kPi, kPi);
  return {b, g};
}

/// Straightforward reference simulator: full 2^n state, cut values from the
/// edge list, mixer as explicit 2x2 rotations per qubit.
inline double reference_expectation(const WeightedGraph& g, const wqaoa::QaoaParams& params) {
  using C = std::complex<double>;
  const int n = g.n_vertices();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> cut(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k)
    for (const auto& e : g.edges())
      if (((k >> e.u) & 1) != ((k >> e.v) & 1)) cut[k] += e.weight;
  std::vector<C> psi(dim, C(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  for (int l = 0; l < params.depth(); ++l) {
    for (std::size_t k = 0; k < dim; ++k) psi[k] *= std::exp(C(0.0, -params.gamma()[l] * cut[k]));
    const double c = std::cos(params.beta()[l]), s = std::sin(params.beta()[l]);
    for (int q = 0; q < n; ++q) {
      const std::size_t m = std::size_t{1} << q;
      for (std::size_t k = 0; k < dim; ++k) {
        if (k & m) continue;
        const C a = psi[k], b = psi[k | m];
        psi[k] = c * a + C(0.0, -s) * b;
        psi[k | m] = C(0.0, -s) * a + c * b;
      }
    }
  }
  double e = 0.0;
  for (std::size_t k = 0; k < dim; ++k) e += std::norm(psi[k]) * cut[k];
  return e;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wqaoa_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
