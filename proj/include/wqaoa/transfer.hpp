// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "wqaoa/graph.hpp"
#include "wqaoa/simulator.hpp"

namespace wqaoa {

/// Median scaled parameters per depth, stored in units of pi, taken from
/// optimized unweighted 9-vertex MaxCut instances.
class ScaledMedianTable {
 public:
  struct Row {
    std::vector<double> beta_over_pi;
    std::vector<double> gamma_over_pi;
    bool operator==(const Row&) const = default;
  };

  /// Compiled-in constants (depths 1-3).
  static const ScaledMedianTable& builtin();
  /// JSON object {"<p>": {"beta_over_pi": [...], "gamma_over_pi": [...]}}.
  static ScaledMedianTable from_file(const std::filesystem::path& path);
  static ScaledMedianTable from_json_text(std::string_view text);

  explicit ScaledMedianTable(std::map<int, Row> rows);

  bool has_depth(int p) const { return rows_.contains(p); }
  const Row& row(int p) const;
  const std::map<int, Row>& rows() const noexcept { return rows_; }
  /// Row p converted to radians, still in degree-scaled units.
  QaoaParams scaled_params(int p) const;

  bool operator==(const ScaledMedianTable&) const = default;

 private:
  std::map<int, Row> rows_;
};

enum class DegreeScaling {
  Arctan,  ///< gamma scaled by arctan(1 / sqrt(d - 1))
  Sqrt,    ///< gamma scaled by 1 / sqrt(d)
};

struct TransferOptions {
  DegreeScaling scaling = DegreeScaling::Arctan;
  /// Use the limiting value pi/2 at average degree exactly 1.
  bool allow_unit_degree = false;
};

/// Factor that maps scaled gamma to instance gamma at average degree `d`.
double degree_factor(double d, const TransferOptions& options = {});

struct TransferInput {
  WeightedGraph graph;
  int p;
};

/// Dataset-side scaling: beta unchanged, gamma divided by the degree factor.
std::pair<std::vector<double>, std::vector<double>> scale_dataset_params(const std::vector<double>& beta_star,
                                                                         const std::vector<double>& gamma_star,
                                                                         double d, const TransferOptions& options = {});

/// Instance-side scaling of parameters given in scaled units (radians):
/// beta passes through, gamma is multiplied by degree_factor(d_w) / mean|w|.
QaoaParams unscale_for_instance(const QaoaParams& scaled, const WeightedGraph& g, const TransferOptions& options = {});

/// Median parameters rescaled for `input.graph`, in radians.
QaoaParams transfer_params(const ScaledMedianTable& table, const TransferInput& input,
                           const TransferOptions& options = {});

struct GammaScalingCheck {
  double r_base;
  double r_scaled;
};

/// Ratio of `params` on g and of (beta, gamma / w) on the graph with weights
/// multiplied by w.
GammaScalingCheck verify_gamma_scaling(const WeightedGraph& g, const QaoaParams& params, double w);

}  // namespace wqaoa
