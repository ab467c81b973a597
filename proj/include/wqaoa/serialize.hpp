// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wqaoa/graph.hpp"
#include "wqaoa/kde.hpp"
#include "wqaoa/optimizer.hpp"
#include "wqaoa/simulator.hpp"

namespace wqaoa {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Reads a whole file; IoError("file not found: ...") when it does not exist.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
Json parse_json(std::string_view text, std::string_view what);

// Graphs: {"n": 4, "edges": [[0, 1, 0.94], ...]}
Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);
/// One graph from a native JSON file, or the first line of a graph6 file
/// (extensions .g6 / .graph6).
WeightedGraph read_graph_file(const std::filesystem::path& path);
/// Every graph in a corpus: newline-delimited JSON objects, a JSON array, a
/// single object, or graph6 lines.
std::vector<WeightedGraph> read_graph_corpus(const std::filesystem::path& path);

Json params_to_json(const QaoaParams& params);
QaoaParams params_from_json(const Json& j);

Json config_to_json(const OptimizerConfig& config);
Json optimization_result_to_json(const OptimizationResult& result, const OptimizerConfig& config);

// KDE model: {"p": .., "bandwidth": .., "points": [[...], ...]}.
Json kde_model_to_json(const KdeModel& model);
KdeModel kde_model_from_json(const Json& j);
/// Training matrix: {"p": .., "points": [[...], ...]}.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

}  // namespace wqaoa
