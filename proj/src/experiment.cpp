// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "wqaoa/error.hpp"
#include "wqaoa/optimizer.hpp"
#include "wqaoa/parallel.hpp"
#include "wqaoa/rng.hpp"

namespace wqaoa {

namespace {

constexpr std::string_view kToolVersion = "wqaoa 1.0.0";

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

bool has_mixed_signs(const std::vector<double>& v) {
  bool pos = false, neg = false;
  for (double x : v) {
    pos |= x > 0.0;
    neg |= x < 0.0;
  }
  return pos && neg;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Transfer: return "transfer";
    case Method::Kde: return "kde";
    case Method::Polish: return "polish";
    case Method::Multistart: return "multistart";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Transfer, Method::Kde, Method::Polish, Method::Multistart})
    if (method_name(m) == name) return m;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate(bool require_corpus_source) const {
  if (methods.empty()) throw DomainError("experiment needs at least one method");
  if (depths.empty()) throw DomainError("experiment needs at least one depth");
  for (int p : depths)
    if (p < 1) throw DomainError("depth must be at least 1");
  if (workers < 1) throw DomainError("worker count must be at least 1");
  if (require_corpus_source && corpus.files.empty() && corpus.count < 1) throw DomainError("corpus needs files or a positive generator count");
  if (distribution) wqaoa::validate(*distribution);
  for (const auto& [p, n] : n_starts)
    if (n < 1) throw DomainError("n_starts must be positive for p=" + std::to_string(p));
}

ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
      throw ParseError("unsupported experiment schema_version", 0);
    c.name = j.value("name", c.name);
    const auto& corpus = j.at("corpus");
    if (corpus.contains("files")) {
      for (const auto& f : corpus.at("files")) c.corpus.files.push_back(resolve(base_dir, f.get<std::string>()));
    } else {
      const auto gen = corpus.value("generator", std::string("erdos_renyi"));
      if (gen != "erdos_renyi") throw DomainError("unknown corpus generator '" + gen + "'");
      c.corpus.n = corpus.at("n").get<int>();
      c.corpus.edge_prob = corpus.at("edge_prob").get<double>();
      c.corpus.count = corpus.at("count").get<int>();
    }
    if (j.contains("distribution") && !j.at("distribution").is_null()) {
      const auto& d = j.at("distribution");
      c.distribution = make_distribution(d.at("type").get<std::string>(), d.value("parameter", 1.0));
    }
    c.rescale = j.value("rescale", true);
    if (j.contains("p")) {
      const auto& p = j.at("p");
      c.depths = p.is_array() ? p.get<std::vector<int>>() : std::vector<int>{p.get<int>()};
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.insert(parse_method(m.get<std::string>()));
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      c.seeds.corpus = s.value("corpus", c.seeds.corpus);
      c.seeds.weights = s.value("weights", c.seeds.weights);
      c.seeds.optimizer = s.value("optimizer", c.seeds.optimizer);
      c.seeds.kde = s.value("kde", c.seeds.kde);
    }
    if (j.contains("n_starts"))
      for (const auto& [k, v] : j.at("n_starts").items()) c.n_starts[std::stoi(k)] = v.get<int>();
    if (j.contains("kde_models"))
      for (const auto& [k, v] : j.at("kde_models").items())
        c.kde_model_files[std::stoi(k)] = resolve(base_dir, v.get<std::string>());
    c.kde_samples = j.value("kde_samples", c.kde_samples);
    if (j.contains("median_table")) c.median_table_file = resolve(base_dir, j.at("median_table").get<std::string>());
    const auto scaling = j.value("degree_scaling", std::string("arctan"));
    if (scaling == "sqrt")
      c.transfer.scaling = DegreeScaling::Sqrt;
    else if (scaling != "arctan")
      throw DomainError("degree_scaling must be 'arctan' or 'sqrt'");
    c.transfer.allow_unit_degree = j.value("allow_unit_degree", false);
    c.grad_tolerance = j.value("grad_tolerance", c.grad_tolerance);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.workers = j.value("workers", c.workers);
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("experiment config schema violation: ") + e.what(), 0);
  } catch (const std::invalid_argument&) {
    throw ParseError("experiment config: depth keys must be integers", 0);
  }
  c.validate();
  return c;
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  Json j{{"schema_version", kSchemaVersion}, {"name", c.name}};
  if (c.corpus.files.empty()) {
    j["corpus"] = {{"generator", "erdos_renyi"}, {"n", c.corpus.n}, {"edge_prob", c.corpus.edge_prob},
                   {"count", c.corpus.count}};
  } else {
    Json files = Json::array();
    for (const auto& f : c.corpus.files) files.push_back(f.string());
    j["corpus"] = {{"files", files}};
  }
  j["distribution"] = c.distribution ? Json{{"type", distribution_name(*c.distribution)},
                                            {"parameter", distribution_parameter(*c.distribution)}}
                                     : Json(nullptr);
  j["rescale"] = c.rescale;
  j["p"] = c.depths;
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["seeds"] = {{"corpus", c.seeds.corpus}, {"weights", c.seeds.weights}, {"optimizer", c.seeds.optimizer},
                {"kde", c.seeds.kde}};
  Json starts = Json::object();
  for (const auto& [p, n] : c.n_starts) starts[std::to_string(p)] = n;
  j["n_starts"] = starts;
  Json kde = Json::object();
  for (const auto& [p, f] : c.kde_model_files) kde[std::to_string(p)] = f.string();
  j["kde_models"] = kde;
  j["kde_samples"] = c.kde_samples;
  if (c.median_table_file) j["median_table"] = c.median_table_file->string();
  j["degree_scaling"] = c.transfer.scaling == DegreeScaling::Sqrt ? "sqrt" : "arctan";
  j["allow_unit_degree"] = c.transfer.allow_unit_degree;
  j["grad_tolerance"] = c.grad_tolerance;
  j["max_iterations"] = c.max_iterations;
  return j;
}

std::vector<CorpusEntry> build_corpus(const ExperimentConfig& config) {
  std::vector<CorpusEntry> corpus;
  if (config.corpus.files.empty()) {
    for (int i = 0; i < config.corpus.count; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "er%04d", i);
      corpus.push_back({id, erdos_renyi(config.corpus.n, config.corpus.edge_prob,
                                        derive_seed(config.seeds.corpus, static_cast<std::uint64_t>(i)))});
    }
  } else {
    for (const auto& file : config.corpus.files) {
      const auto graphs = read_graph_corpus(file);
      for (std::size_t k = 0; k < graphs.size(); ++k)
        corpus.push_back({file.stem().string() + ":" + std::to_string(k), graphs[k]});
    }
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& g = corpus[i].graph;
    if (g.num_edges() == 0) continue;
    if (config.distribution) g = assign_weights(g, *config.distribution, derive_seed(config.seeds.weights, i));
    if (config.rescale) g = rescale_to_unit_mean(g);
  }
  return corpus;
}

namespace {

struct Context {
  const ExperimentConfig& config;
  ScaledMedianTable table;
  std::map<int, std::shared_ptr<const KdeModel>> kde;
  bool heavy_tailed;
};

Json ratio_block(const QaoaParams& params, double ratio) {
  Json j = params_to_json(params);
  j["ratio"] = ratio;
  return j;
}

InstanceOutcome evaluate(const Context& ctx, const ProblemInstance& inst, const std::string& id, std::size_t index,
                         int p) {
  const auto& cfg = ctx.config;
  const auto& g = inst.graph();
  InstanceOutcome out{id, p, false, Json::object(), std::nullopt};
  Json& rec = out.record;
  rec["schema_version"] = kSchemaVersion;
  rec["instance"] = id;
  rec["p"] = p;
  rec["n"] = g.n_vertices();
  rec["num_edges"] = g.num_edges();
  try {
    if (g.num_edges() == 0) throw DomainError("edgeless graph");
    rec["average_degree"] = average_degree(g);
    rec["mean_abs_weight"] = average_abs_weight(g);
    rec["weight_std"] = weight_std(g);
    rec["c_min"] = inst.c_min();
    rec["c_max"] = inst.c_max();
    inst.ratio(inst.c_max());  // rejects degenerate instances up front

    InstanceRecord stats;
    stats.graph_id = id;
    stats.weight_std = weight_std(g);

    const std::uint64_t stream = index * 64 + static_cast<std::uint64_t>(p);
    OptimizerConfig opt;
    opt.p = p;
    opt.grad_tolerance = cfg.grad_tolerance;
    opt.max_iterations = cfg.max_iterations;
    opt.rng_seed = derive_seed(cfg.seeds.optimizer, stream);

    const bool need_transfer = cfg.methods.contains(Method::Transfer) || cfg.methods.contains(Method::Kde) ||
                               cfg.methods.contains(Method::Polish);
    std::optional<QaoaParams> transferred;
    std::optional<QaoaParams> polished;
    if (need_transfer) {
      transferred = transfer_params(ctx.table, {g, p}, cfg.transfer);
      stats.r_transferred = inst.approximation_ratio(*transferred);
      rec["transferred"] = ratio_block(*transferred, stats.r_transferred);
    }
    if (cfg.methods.contains(Method::Kde)) {
      auto it = ctx.kde.find(p);
      if (it == ctx.kde.end()) throw DomainError("no KDE model configured for p=" + std::to_string(p));
      const auto kde = kde_transfer(*it->second, ctx.table, inst, p, cfg.kde_samples,
                                    derive_seed(cfg.seeds.kde, stream), cfg.transfer);
      stats.r_kde = kde.ratio;
      rec["kde"] = ratio_block(kde.params, kde.ratio);
      rec["kde"]["chosen"] = kde.chosen;
      rec["kde"]["samples"] = cfg.kde_samples;
    }
    if (cfg.methods.contains(Method::Polish)) {
      const auto res = polish_transferred(inst, *transferred, opt);
      polished = res.best_params;
      stats.r_polished = res.best_ratio;
      rec["polished"] = ratio_block(res.best_params, res.best_ratio);
      rec["polished"]["iterations"] = res.starts.front().iterations;
      rec["polished"]["converged"] = res.starts.front().converged;
    }
    if (cfg.methods.contains(Method::Multistart)) {
      auto starts = cfg.n_starts.find(p);
      opt.n_starts = starts != cfg.n_starts.end() ? starts->second : default_start_count(p, ctx.heavy_tailed);
      const auto res = multistart_optimize(inst, opt);
      stats.r_optimized = res.best_ratio;
      std::size_t converged = 0, failed = 0;
      for (const auto& s : res.starts) {
        converged += s.converged ? 1 : 0;
        failed += s.error ? 1 : 0;
      }
      Json& ms = rec["multistart"] = ratio_block(res.best_params, res.best_ratio);
      ms["n_starts"] = opt.n_starts;
      ms["best_start"] = res.best_start;
      ms["converged_starts"] = converged;
      ms["failed_starts"] = failed;
      ms["gamma_mixed_signs"] = has_mixed_signs(res.best_params.gamma());
      if (transferred) {
        const auto d = canonical_distance(res.best_params, *transferred);
        ms["distance_to_transferred"] = {{"beta", d.d_beta}, {"gamma", d.d_gamma}, {"total", d.d_total}};
      }
      if (polished) {
        stats.polished_param_distance = canonical_distance(res.best_params, *polished).d_total;
        ms["distance_to_polished"] = *stats.polished_param_distance;
      }
    }
    rec["status"] = "ok";
    out.ok = true;
    out.stats = stats;
  } catch (const Error& e) {
    rec["status"] = "error";
    rec["error"] = e.what();
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, build_corpus(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<CorpusEntry>& corpus) {
  config.validate(false);
  if (corpus.empty()) throw DomainError("experiment corpus is empty");
  Context ctx{config,
              config.median_table_file ? ScaledMedianTable::from_file(*config.median_table_file)
                                       : ScaledMedianTable::builtin(),
              config.kde_models,
              config.distribution && std::holds_alternative<TruncatedCauchy>(*config.distribution)};
  if (config.methods.contains(Method::Kde))
    for (const auto& [p, file] : config.kde_model_files)
      if (!ctx.kde.contains(p))
        ctx.kde[p] = std::make_shared<const KdeModel>(kde_model_from_json(parse_json(read_text_file(file), file.string())));

  ExperimentResult result;
  result.corpus = corpus;
  const std::size_t depth_count = config.depths.size();
  std::vector<InstanceOutcome> slots(corpus.size() * depth_count);
  const auto before = local_optimization_count();
  parallel_for(corpus.size(), config.workers, [&](std::size_t i) {
    std::optional<ProblemInstance> inst;
    std::string setup_error;
    try {
      inst.emplace(corpus[i].graph);
    } catch (const Error& e) {
      setup_error = e.what();
    }
    for (std::size_t k = 0; k < depth_count; ++k) {
      const int p = config.depths[k];
      if (inst) {
        slots[i * depth_count + k] = evaluate(ctx, *inst, corpus[i].id, i, p);
      } else {
        Json rec{{"schema_version", kSchemaVersion}, {"instance", corpus[i].id}, {"p", p},
                 {"status", "error"}, {"error", setup_error}};
        slots[i * depth_count + k] = {corpus[i].id, p, false, std::move(rec), std::nullopt};
      }
    }
  });
  result.local_optimizations = local_optimization_count() - before;
  result.outcomes = std::move(slots);

  std::map<int, std::vector<InstanceRecord>> by_depth;
  std::vector<InstanceRecord> all;
  for (const auto& o : result.outcomes) {
    if (!o.ok) {
      result.incomplete.push_back(o.id + "/p" + std::to_string(o.p));
      continue;
    }
    by_depth[o.p].push_back(*o.stats);
    all.push_back(*o.stats);
  }
  const bool have_transfer = config.methods.contains(Method::Transfer) || config.methods.contains(Method::Kde) ||
                             config.methods.contains(Method::Polish);
  if (have_transfer) {
    for (const auto& [p, recs] : by_depth) result.per_depth.emplace(p, aggregate(recs));
    if (!all.empty()) result.overall = aggregate(all);
  }
  return result;
}

Json gap_statistics_to_json(const GapStatistics& s) {
  auto quart = [](const std::optional<Quartiles>& q) {
    return q ? Json{{"q1", q->q1}, {"median", q->median}, {"q3", q->q3}} : Json(nullptr);
  };
  auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  return {{"count", s.count},
          {"r_transferred", quart(s.r_transferred)},
          {"r_kde", quart(s.r_kde)},
          {"r_polished", quart(s.r_polished)},
          {"r_optimized", quart(s.r_optimized)},
          {"median_gap_pp", opt(s.median_gap_pp)},
          {"gap_iqr_pp", s.iqr ? Json{s.iqr->first, s.iqr->second} : Json(nullptr)},
          {"kde_median_gap_pp", opt(s.kde_median_gap_pp)},
          {"recovery_rate", opt(s.recovery_rate)},
          {"parameter_match_rate", opt(s.parameter_match_rate)}};
}

void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream graphs;
  for (const auto& e : result.corpus) graphs << Json{{"id", e.id}, {"graph", graph_to_json(e.graph)}}.dump() << '\n';
  write_text_file(dir / "graphs.jsonl", graphs.str());

  std::ostringstream records;
  for (const auto& o : result.outcomes) records << o.record.dump() << '\n';
  write_text_file(dir / "records.jsonl", records.str());

  const std::string dist = config.distribution ? distribution_name(*config.distribution) : "file";
  std::ostringstream csv;
  csv << "p,distribution,count,median_r_optimized,median_r_transferred,median_r_kde,median_r_polished,"
         "median_gap_pp,gap_q1_pp,gap_q3_pp,kde_median_gap_pp,recovery_rate,parameter_match_rate\n";
  auto row = [&](const std::string& p, const GapStatistics& s) {
    auto med = [](const std::optional<Quartiles>& q) { return q ? std::optional<double>(q->median) : std::nullopt; };
    csv << p << ',' << dist << ',' << s.count << ',' << format_optional(med(s.r_optimized)) << ','
        << format_double(s.r_transferred.median) << ',' << format_optional(med(s.r_kde)) << ','
        << format_optional(med(s.r_polished)) << ',' << format_optional(s.median_gap_pp) << ','
        << format_optional(s.iqr ? std::optional<double>(s.iqr->first) : std::nullopt) << ','
        << format_optional(s.iqr ? std::optional<double>(s.iqr->second) : std::nullopt) << ','
        << format_optional(s.kde_median_gap_pp) << ',' << format_optional(s.recovery_rate) << ','
        << format_optional(s.parameter_match_rate) << '\n';
  };
  Json agg = Json::object();
  for (const auto& [p, s] : result.per_depth) {
    row(std::to_string(p), s);
    agg[std::to_string(p)] = gap_statistics_to_json(s);
  }
  if (result.overall) {
    row("all", *result.overall);
    agg["all"] = gap_statistics_to_json(*result.overall);
  }
  write_text_file(dir / "aggregate.csv", csv.str());
  write_text_file(dir / "aggregate.json", Json{{"schema_version", kSchemaVersion}, {"by_depth", agg}}.dump(2) + "\n");

  std::ostringstream scatter;
  scatter << "p,instance,weight_std,gap_pp\n";
  for (const auto& [p, s] : result.per_depth) {
    const auto table = weight_std_vs_gap(s.per_instance);
    for (const auto& r : table.rows)
      scatter << p << ',' << r.graph_id << ',' << format_double(r.weight_std) << ',' << format_double(r.gap_pp) << '\n';
  }
  write_text_file(dir / "std_gap.csv", scatter.str());

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json manifest{{"schema_version", kSchemaVersion},
                {"tool_version", std::string(kToolVersion)},
                {"rng_algorithm", std::string(Rng::kAlgorithm)},
                {"created_utc", stamp},
                {"config", experiment_config_to_json(config)},
                {"workers", config.workers},
                {"instances", result.corpus.size()},
                {"records", result.outcomes.size()},
                {"local_optimizations", result.local_optimizations},
                {"complete", result.incomplete.empty()},
                {"incomplete", result.incomplete},
                {"files", {"graphs.jsonl", "records.jsonl", "aggregate.csv", "aggregate.json", "std_gap.csv"}}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace wqaoa
