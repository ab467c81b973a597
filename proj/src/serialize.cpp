// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/serialize.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "wqaoa/error.hpp"
#include "wqaoa/graph6.hpp"
#include "wqaoa/rng.hpp"

namespace wqaoa {

std::string read_text_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw IoError("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON", e.byte > 0 ? e.byte - 1 : 0);
  }
}

namespace {

template <class F>
auto schema_guard(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + " schema violation: " + e.what(), 0);
  }
}

bool is_graph6_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".g6" || ext == ".graph6";
}

}  // namespace

Json graph_to_json(const WeightedGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  return {{"n", g.n_vertices()}, {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const Json& j) {
  return schema_guard("graph", [&] {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || (e.size() != 3 && e.size() != 2))
        throw ParseError("graph schema violation: edges must be [i, j, w] triples", 0);
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.size() == 3 ? e.at(2).get<double>() : 1.0});
    }
    return WeightedGraph(n, std::move(edges));
  });
}

WeightedGraph read_graph_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  if (is_graph6_path(path)) {
    std::istringstream in(text);
    auto graphs = read_graph6_stream(in);
    if (graphs.empty()) throw ParseError("graph6 file contains no graphs", 0);
    return std::move(graphs.front());
  }
  return graph_from_json(parse_json(text, path.string()));
}

std::vector<WeightedGraph> read_graph_corpus(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  std::vector<WeightedGraph> graphs;
  if (is_graph6_path(path)) {
    std::istringstream in(text);
    return read_graph6_stream(in);
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    for (const auto& g : parse_json(text, path.string())) graphs.push_back(graph_from_json(g));
    return graphs;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      try {
        graphs.push_back(graph_from_json(parse_json(line, path.string())));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), offset + e.offset());
      }
    }
    offset += line.size() + 1;
  }
  return graphs;
}

Json params_to_json(const QaoaParams& params) {
  Json beta_pi = Json::array();
  Json gamma_pi = Json::array();
  for (double b : params.beta()) beta_pi.push_back(b / std::numbers::pi);
  for (double g : params.gamma()) gamma_pi.push_back(g / std::numbers::pi);
  return {{"p", params.depth()},
          {"beta", params.beta()},
          {"gamma", params.gamma()},
          {"beta_over_pi", std::move(beta_pi)},
          {"gamma_over_pi", std::move(gamma_pi)}};
}

QaoaParams params_from_json(const Json& j) {
  return schema_guard("parameters", [&] {
    return QaoaParams(j.at("beta").get<std::vector<double>>(), j.at("gamma").get<std::vector<double>>());
  });
}

Json config_to_json(const OptimizerConfig& config) {
  Json j{{"p", config.p},
         {"n_starts", config.n_starts},
         {"grad_tolerance", config.grad_tolerance},
         {"max_iterations", config.max_iterations},
         {"rng_seed", config.rng_seed},
         {"rng_algorithm", std::string(Rng::kAlgorithm)}};
  j["beta_bounds"] = config.beta_bounds ? Json{config.beta_bounds->lo, config.beta_bounds->hi} : Json("default");
  j["gamma_bounds"] = config.gamma_bounds ? Json{config.gamma_bounds->lo, config.gamma_bounds->hi} : Json("default");
  return j;
}

Json optimization_result_to_json(const OptimizationResult& result, const OptimizerConfig& config) {
  Json starts = Json::array();
  for (const auto& s : result.starts) {
    Json rec{{"init", params_to_json(s.init)},
             {"iterations", s.iterations},
             {"converged", s.converged}};
    if (s.final_params) {
      rec["final"] = params_to_json(*s.final_params);
      rec["final_objective"] = s.final_objective;
    }
    if (s.error) rec["error"] = *s.error;
    starts.push_back(std::move(rec));
  }
  return {{"schema_version", kSchemaVersion},
          {"config", config_to_json(config)},
          {"best_params", params_to_json(result.best_params)},
          {"best_objective", result.best_objective},
          {"best_ratio", result.best_ratio},
          {"best_start", result.best_start},
          {"starts", std::move(starts)}};
}

Json matrix_to_json(const Matrix& m) {
  return {{"schema_version", kSchemaVersion}, {"p", m.cols() / 2}, {"points", m.to_rows()}};
}

Matrix matrix_from_json(const Json& j) {
  return schema_guard("parameter matrix", [&] {
    auto rows = j.at("points").get<std::vector<std::vector<double>>>();
    Matrix m = Matrix::from_rows(rows);
    if (j.contains("p") && m.cols() != 2 * j.at("p").get<std::size_t>())
      throw ParseError("parameter matrix schema violation: rows must have 2p entries", 0);
    return m;
  });
}

Json kde_model_to_json(const KdeModel& model) {
  return {{"schema_version", kSchemaVersion},
          {"p", model.depth()},
          {"bandwidth", model.bandwidth()},
          {"points", model.points().to_rows()}};
}

KdeModel kde_model_from_json(const Json& j) {
  const double bandwidth = schema_guard("KDE model", [&] { return j.at("bandwidth").get<double>(); });
  return KdeModel(matrix_from_json(j), bandwidth);
}

}  // namespace wqaoa
