// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wqaoa/analysis.hpp"
#include "wqaoa/graph.hpp"
#include "wqaoa/kde.hpp"
#include "wqaoa/serialize.hpp"
#include "wqaoa/transfer.hpp"

namespace wqaoa {

enum class Method { Transfer, Kde, Polish, Multistart };

std::string method_name(Method m);
Method parse_method(std::string_view name);

struct CorpusSpec {
  /// Erdos-Renyi generator, used when `files` is empty.
  int n = 10;
  double edge_prob = 0.5;
  int count = 0;
  /// Corpus files (native JSON / JSONL / graph6).
  std::vector<std::filesystem::path> files;
};

struct ExperimentSeeds {
  std::uint64_t corpus = 1;
  std::uint64_t weights = 2;
  std::uint64_t optimizer = 3;
  std::uint64_t kde = 4;
};

struct ExperimentConfig {
  std::string name = "experiment";
  CorpusSpec corpus;
  /// Replaces corpus weights when set.
  std::optional<WeightDistribution> distribution;
  bool rescale = true;
  std::vector<int> depths{1};
  std::set<Method> methods{Method::Transfer};
  ExperimentSeeds seeds;
  /// Start counts per depth; defaults follow default_start_count().
  std::map<int, int> n_starts;
  std::map<int, std::filesystem::path> kde_model_files;
  /// Preloaded models; take precedence over kde_model_files.
  std::map<int, std::shared_ptr<const KdeModel>> kde_models;
  std::size_t kde_samples = 10;
  std::optional<std::filesystem::path> median_table_file;
  TransferOptions transfer;
  double grad_tolerance = 1e-8;
  int max_iterations = 500;
  int workers = 1;
  std::filesystem::path output_dir;

  /// The corpus source is not needed when the corpus is passed in directly.
  void validate(bool require_corpus_source = true) const;
};

/// Parses the JSON config format; relative paths resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir);
Json experiment_config_to_json(const ExperimentConfig& config);

struct CorpusEntry {
  std::string id;
  WeightedGraph graph;
};

/// Builds the weighted (and optionally rescaled) corpus of a config.
std::vector<CorpusEntry> build_corpus(const ExperimentConfig& config);

struct InstanceOutcome {
  std::string id;
  int p;
  bool ok;
  Json record;
  /// Present when ok.
  std::optional<InstanceRecord> stats;
};

struct ExperimentResult {
  std::vector<CorpusEntry> corpus;
  /// Ordered by (corpus index, depth) regardless of worker count.
  std::vector<InstanceOutcome> outcomes;
  std::map<int, GapStatistics> per_depth;
  std::optional<GapStatistics> overall;
  std::uint64_t local_optimizations = 0;
  std::vector<std::string> incomplete;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<CorpusEntry>& corpus);

/// Writes graphs.jsonl, records.jsonl, aggregate.csv, aggregate.json,
/// std_gap.csv and manifest.json. Only the manifest carries timestamps.
void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                              const std::filesystem::path& dir);

Json gap_statistics_to_json(const GapStatistics& stats);

}  // namespace wqaoa
