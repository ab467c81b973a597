// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/transfer.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "wqaoa/error.hpp"

namespace wqaoa {

const ScaledMedianTable& ScaledMedianTable::builtin() {
  static const ScaledMedianTable table({
      {1, {{-0.101708}, {-0.287231}}},
      {2, {{-0.139136, -0.083772}, {-0.230102, -0.453701}}},
      {3, {{-0.149780, -0.107380, -0.063381}, {-0.199343, -0.389866, -0.466856}}},
  });
  return table;
}

ScaledMedianTable::ScaledMedianTable(std::map<int, Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("median table is empty");
  for (const auto& [p, row] : rows_) {
    if (p < 1) throw DomainError("median table depth must be positive");
    if (row.beta_over_pi.size() != static_cast<std::size_t>(p) || row.gamma_over_pi.size() != static_cast<std::size_t>(p))
      throw DimensionError("median table row " + std::to_string(p) + " must have " + std::to_string(p) +
                           " beta and gamma entries");
  }
}

ScaledMedianTable ScaledMedianTable::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("median table: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("median table must be a JSON object", 0);
  std::map<int, Row> rows;
  try {
    for (const auto& [key, value] : doc.items()) {
      std::size_t used = 0;
      const int p = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
      rows[p] = Row{value.at("beta_over_pi").get<std::vector<double>>(),
                    value.at("gamma_over_pi").get<std::vector<double>>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("median table schema: ") + e.what(), 0);
  } catch (const std::logic_error&) {
    throw ParseError("median table keys must be integer depths", 0);
  }
  return ScaledMedianTable(std::move(rows));
}

ScaledMedianTable ScaledMedianTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open median table file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

const ScaledMedianTable::Row& ScaledMedianTable::row(int p) const {
  auto it = rows_.find(p);
  if (it == rows_.end()) throw DomainError("no median parameters for depth p=" + std::to_string(p));
  return it->second;
}

QaoaParams ScaledMedianTable::scaled_params(int p) const {
  const auto& r = row(p);
  std::vector<double> beta(r.beta_over_pi);
  std::vector<double> gamma(r.gamma_over_pi);
  for (auto& b : beta) b *= std::numbers::pi;
  for (auto& g : gamma) g *= std::numbers::pi;
  return QaoaParams(std::move(beta), std::move(gamma));
}

double degree_factor(double d, const TransferOptions& options) {
  if (!std::isfinite(d)) throw DomainError("average degree must be finite");
  if (options.scaling == DegreeScaling::Sqrt) {
    if (!(d > 0.0)) throw DomainError("sqrt degree scaling needs a positive average degree");
    return 1.0 / std::sqrt(d);
  }
  if (d == 1.0 && options.allow_unit_degree) return std::numbers::pi / 2.0;
  if (!(d > 1.0))
    throw DomainError("average degree " + std::to_string(d) +
                      " <= 1: arctan degree scaling is undefined; optimize this instance directly");
  return std::atan(1.0 / std::sqrt(d - 1.0));
}

std::pair<std::vector<double>, std::vector<double>> scale_dataset_params(const std::vector<double>& beta_star,
                                                                         const std::vector<double>& gamma_star,
                                                                         double d, const TransferOptions& options) {
  const double factor = degree_factor(d, options);
  std::vector<double> gamma(gamma_star);
  for (auto& g : gamma) g /= factor;
  return {beta_star, gamma};
}

QaoaParams unscale_for_instance(const QaoaParams& scaled, const WeightedGraph& g, const TransferOptions& options) {
  if (g.num_edges() == 0) throw DomainError("cannot transfer parameters to an edgeless graph");
  const double factor = degree_factor(average_degree(g), options) / average_abs_weight(g);
  std::vector<double> gamma(scaled.gamma());
  for (auto& x : gamma) x *= factor;
  return QaoaParams(scaled.beta(), std::move(gamma));
}

QaoaParams transfer_params(const ScaledMedianTable& table, const TransferInput& input, const TransferOptions& options) {
  if (!table.has_depth(input.p))
    throw DomainError("unsupported depth p=" + std::to_string(input.p) + ": median parameters exist only for p in 1.." +
                      std::to_string(table.rows().rbegin()->first));
  return unscale_for_instance(table.scaled_params(input.p), input.graph, options);
}

GammaScalingCheck verify_gamma_scaling(const WeightedGraph& g, const QaoaParams& params, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("scale factor w must be finite and positive");
  std::vector<double> gamma(params.gamma());
  for (auto& x : gamma) x /= w;
  const double r_base = approximation_ratio(g, params);
  const double r_scaled = approximation_ratio(g.scaled(w), QaoaParams(params.beta(), std::move(gamma)));
  return {r_base, r_scaled};
}

}  // namespace wqaoa
