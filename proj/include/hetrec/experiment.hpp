#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetrec/baselines.hpp"
#include "hetrec/errors.hpp"
#include "hetrec/fitness.hpp"
#include "hetrec/ga.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/metrics.hpp"
#include "hetrec/parallel.hpp"
#include "hetrec/ppr.hpp"
#include "hetrec/recommend.hpp"
#include "hetrec/split.hpp"
#include "hetrec/stats.hpp"
#include "hetrec/weights.hpp"

namespace hetrec {

struct SplitSpec {
  enum class Kind { LeaveOneOut, Temporal };
  Kind kind = Kind::LeaveOneOut;
  std::string interaction;
  std::string tag;          // leave-one-out target tag
  double fraction = 0.1;    // temporal test share

  static SplitSpec from_json(const nlohmann::json& j) {
    SplitSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "leave_one_out")
      s.kind = Kind::LeaveOneOut;
    else if (kind == "temporal")
      s.kind = Kind::Temporal;
    else
      throw ConfigError("split.kind must be leave_one_out or temporal, got '" + kind + "'");
    s.interaction = j.at("interaction").get<std::string>();
    s.tag = j.value("tag", std::string());
    s.fraction = j.value("fraction", 0.1);
    return s;
  }
};

inline EvalSplit make_split(std::span<const InteractionRecord> records, const SplitSpec& spec) {
  if (spec.kind == SplitSpec::Kind::LeaveOneOut)
    return split_leave_one_out(records, spec.interaction, spec.tag);
  return split_temporal(records, spec.interaction, spec.fraction);
}

enum class ModelKind { Popular, UbKnn, GraphUniform, GraphWeighted, GraphUndirected, GraphUserStudy };

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "popular") return ModelKind::Popular;
  if (s == "ubknn") return ModelKind::UbKnn;
  if (s == "graph-uniform") return ModelKind::GraphUniform;
  if (s == "graph-weighted") return ModelKind::GraphWeighted;
  if (s == "graph-undirected") return ModelKind::GraphUndirected;
  if (s == "graph-userstudy") return ModelKind::GraphUserStudy;
  throw ConfigError("unknown model '" + s +
                    "' (expected popular|ubknn|graph-uniform|graph-weighted|graph-undirected|"
                    "graph-userstudy)");
}

struct ModelSpec {
  std::string name;  // the selector string
  ModelKind kind = ModelKind::Popular;
  std::filesystem::path weights;  // weighted variants
  int neighbors = 60;             // ubknn neighbourhood size
};

inline std::vector<FilterRule> filters_from_json(const nlohmann::json& j) {
  std::vector<FilterRule> rules;
  for (const auto& f : j) {
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "exclude_interacted") {
      std::set<std::string> interactions;
      for (const auto& s : f.at("interactions")) interactions.insert(s.get<std::string>());
      rules.push_back(FilterRule::exclude_interacted(std::move(interactions)));
    } else if (kind == "require_prerequisite") {
      std::map<std::string, std::string> prereq;
      for (const auto& [k, v] : f.at("map").items()) prereq[k] = v.get<std::string>();
      rules.push_back(FilterRule::require_prerequisite(std::move(prereq)));
    } else {
      throw ConfigError("unknown filter kind '" + kind + "'");
    }
  }
  return rules;
}

/// One JSON document drives both `evaluate` and `optimize`.
struct ExperimentConfig {
  std::filesystem::path dataset;
  std::filesystem::path schema;
  SplitSpec split;
  std::string target_tag;
  std::vector<ModelSpec> models;
  std::vector<int> cutoffs{5, 10};
  RecMode mode = RecMode::DirectRank;
  int neighbor_count = 90;
  SolverConfig solver;
  std::vector<FilterRule> filters;
  std::uint64_t seed = 42;
  double sample_fraction = 1.0;
  int sample_seeds = 1;

  // optimize section
  GaConfig ga;
  FitnessMetric fitness_metric = FitnessMetric::MRR;
  int fitness_k = 5;
  int opt_seeds = 1;
  bool undirected = false;

  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {}) {
    ExperimentConfig c;
    auto resolve = [&](const std::string& p) -> std::filesystem::path {
      std::filesystem::path path(p);
      if (path.is_relative() && !base_dir.empty()) return base_dir / path;
      return path;
    };
    c.dataset = resolve(j.at("dataset").get<std::string>());
    c.schema = resolve(j.at("schema").get<std::string>());
    c.split = SplitSpec::from_json(j.at("split"));
    c.target_tag = j.at("target_tag").get<std::string>();
    if (j.contains("models")) {
      for (const auto& m : j.at("models")) {
        ModelSpec spec;
        if (m.is_string()) {
          spec.name = m.get<std::string>();
        } else {
          spec.name = m.at("name").get<std::string>();
          if (m.contains("weights")) spec.weights = resolve(m.at("weights").get<std::string>());
          spec.neighbors = m.value("neighbors", 60);
        }
        spec.kind = model_kind_from_string(spec.name);
        c.models.push_back(std::move(spec));
      }
    }
    if (j.contains("cutoffs")) {
      c.cutoffs.clear();
      for (const auto& k : j.at("cutoffs")) c.cutoffs.push_back(k.get<int>());
      if (c.cutoffs.empty()) throw ConfigError("cutoffs must not be empty");
      for (int k : c.cutoffs)
        if (k < 1) throw ConfigError("cutoffs must be >= 1");
    }
    if (j.contains("mode")) {
      const auto& m = j.at("mode");
      const std::string kind = m.at("kind").get<std::string>();
      if (kind == "direct") {
        c.mode = RecMode::DirectRank;
      } else if (kind == "neighbors") {
        c.mode = RecMode::NeighborFrequency;
        c.neighbor_count = m.value("count", 90);
      } else {
        throw ConfigError("mode.kind must be direct or neighbors");
      }
    }
    c.solver.alpha = j.value("alpha", 0.3);
    c.solver.tolerance = j.value("tolerance", 1e-8);
    c.solver.max_iterations = j.value("max_iterations", 200);
    c.solver.validate();
    if (j.contains("filters")) c.filters = filters_from_json(j.at("filters"));
    c.seed = j.value("seed", std::uint64_t{42});
    if (j.contains("fitness")) {
      const auto& f = j.at("fitness");
      c.fitness_metric = fitness_metric_from_string(f.value("metric", std::string("mrr")));
      c.fitness_k = f.value("k", 5);
      if (c.fitness_k < 1) throw ConfigError("fitness.k must be >= 1");
    }
    if (j.contains("ga")) {
      const auto& g = j.at("ga");
      c.ga.population_size = g.value("population_size", 10);
      c.ga.parents_mating = g.value("parents_mating", 4);
      c.ga.mutation_gene_fraction = g.value("mutation_gene_fraction", 0.10);
      if (g.contains("mutation_range")) {
        c.ga.mutation_low = g.at("mutation_range").at(0).get<double>();
        c.ga.mutation_high = g.at("mutation_range").at(1).get<double>();
      }
      if (g.contains("gene_range")) {
        c.ga.gene_min = g.at("gene_range").at(0).get<double>();
        c.ga.gene_max = g.at("gene_range").at(1).get<double>();
      }
      c.ga.max_generations = g.value("max_generations", 200);
      c.ga.patience = g.value("patience", 20);
      c.ga.rng_seed = g.value("seed", std::uint64_t{0});
      c.ga.validate();
    }
    c.undirected = j.value("undirected", false);
    c.opt_seeds = j.value("seeds", 1);
    if (c.opt_seeds < 1) throw ConfigError("seeds must be >= 1");
    return c;
  }

  static ExperimentConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    try {
      return from_json(j, path.parent_path());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
};

struct CaseRow {
  std::string user_id;
  Timestamp cut = 0;
  std::map<int, double> rr;   // per cutoff
  std::map<int, int> hit;
  bool fallback = false;
};

struct ModelReport {
  std::string model;
  std::vector<int> cutoffs;
  std::vector<CaseRow> rows;          // sorted by (user_id, cut)
  std::map<int, double> mrr, hr;      // aggregates per cutoff
  std::size_t fallback_cases = 0;     // cold users served the popularity list

  nlohmann::json to_json() const {
    nlohmann::json per_cutoff = nlohmann::json::object();
    for (int k : cutoffs)
      per_cutoff[std::to_string(k)] = {{"mrr", mrr.at(k)}, {"hr", hr.at(k)}};
    return {{"model", model},
            {"cutoffs", per_cutoff},
            {"cases", rows.size()},
            {"fallback_cases", fallback_cases}};
  }
};

namespace detail {

/// Evaluates one model over the test cases of a split. Cold users (absent from
/// the training structures) fall back to the most-popular list.
inline ModelReport evaluate_model(const ModelSpec& model, const ExperimentConfig& config,
                                  const HeterogeneousGraph& graph, const TransitionMatrix* matrix,
                                  const InteractionMatrixView& view,
                                  std::span<const EvalCase> cases) {
  ModelReport report;
  report.model = model.name;
  report.cutoffs = config.cutoffs;
  const int k_max = *std::max_element(config.cutoffs.begin(), config.cutoffs.end());

  std::vector<CaseRow> rows(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const EvalCase& c = cases[i];
    RecommendationRequest request;
    request.user_id = c.user_id;
    request.target_tag = config.target_tag;
    request.k = k_max;
    request.mode = config.mode;
    request.neighbor_count = config.neighbor_count;
    request.filters = config.filters;

    RankedList list;
    switch (model.kind) {
      case ModelKind::Popular:
        list = most_popular(view, config.target_tag, request);
        break;
      case ModelKind::UbKnn:
        list = ubknn_recommend(view, c.user_id, model.neighbors, request);
        break;
      default: {
        try {
          list = recommend_with(*matrix, graph, request, config.solver);
        } catch (const UnknownUserError&) {
          list = most_popular(view, config.target_tag, request);
          list.used_fallback = true;
        }
        break;
      }
    }
    CaseRow row;
    row.user_id = c.user_id;
    row.cut = c.cut;
    row.fallback = list.used_fallback;
    const auto ids = ids_of(list);
    for (int k : config.cutoffs) {
      row.rr[k] = reciprocal_rank_at_k(ids, c.truth, k);
      row.hit[k] = hit_at_k(ids, c.truth, k);
    }
    rows[i] = std::move(row);
  });

  std::sort(rows.begin(), rows.end(), [](const CaseRow& a, const CaseRow& b) {
    if (a.user_id != b.user_id) return a.user_id < b.user_id;
    return a.cut < b.cut;
  });
  for (const auto& row : rows) report.fallback_cases += row.fallback ? 1 : 0;
  for (int k : config.cutoffs) {
    double rr_sum = 0.0, hit_sum = 0.0;
    for (const auto& row : rows) {
      rr_sum += row.rr.at(k);
      hit_sum += row.hit.at(k);
    }
    const double n = static_cast<double>(rows.size());
    report.mrr[k] = rows.empty() ? 0.0 : rr_sum / n;
    report.hr[k] = rows.empty() ? 0.0 : hit_sum / n;
  }
  report.rows = std::move(rows);
  return report;
}

}  // namespace detail

struct ExperimentResult {
  EvalSplit split;
  std::vector<ModelReport> reports;
  std::size_t dropped_records = 0;
};

/// Evaluates one model against an existing split, building the training
/// structures from split.train. `weights` overrides the model's weight file
/// for the graph variants (the in-process path used when weights were just
/// learned).
inline ModelReport evaluate_model_on_split(const EvalSplit& split,
                                           const EdgeTypeRegistry& registry,
                                           const ExperimentConfig& config, const ModelSpec& model,
                                           const WeightVector* weights = nullptr) {
  const HeterogeneousGraph graph = build_graph(split.train, registry);
  const InteractionMatrixView view(split.train, registry);
  TransitionMatrix matrix;
  const TransitionMatrix* matrix_ptr = nullptr;
  switch (model.kind) {
    case ModelKind::Popular:
    case ModelKind::UbKnn:
      break;
    case ModelKind::GraphUniform:
      matrix = build_transition(graph, WeightVector::uniform(registry));
      matrix_ptr = &matrix;
      break;
    default: {
      const WeightVector loaded =
          weights ? *weights : WeightVector::load(registry, model.weights);
      matrix = build_transition(graph, loaded);
      matrix_ptr = &matrix;
      break;
    }
  }
  return detail::evaluate_model(model, config, graph, matrix_ptr, view, split.test);
}

/// Builds the split, trains every requested model on the training remainder,
/// and evaluates all test cases at every cutoff. `sample_seed`, when given,
/// subsamples the training records (the test set stays untouched).
inline ExperimentResult run_experiment(std::vector<InteractionRecord> records,
                                       const EdgeTypeRegistry& registry,
                                       const ExperimentConfig& config,
                                       std::optional<std::uint64_t> sample_seed = {}) {
  if (config.models.empty()) throw ConfigError("no models configured");
  // Load every weight file up front: config errors must precede compute.
  std::map<std::string, WeightVector> model_weights;
  for (const auto& m : config.models) {
    switch (m.kind) {
      case ModelKind::GraphWeighted:
      case ModelKind::GraphUserStudy: {
        if (m.weights.empty())
          throw ConfigError("model '" + m.name + "' requires a weight file");
        model_weights.emplace(m.name, WeightVector::load(registry, m.weights));
        break;
      }
      case ModelKind::GraphUndirected: {
        if (m.weights.empty())
          throw ConfigError("model '" + m.name + "' requires a weight file");
        std::ifstream in(m.weights);
        if (!in) throw DataError("cannot open weight file: " + m.weights.string());
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw DataError(m.weights.string() + ": " + e.what());
        }
        for (const auto& [key, _] : j.items())
          if (key.find(':') != std::string::npos)
            throw ConfigError("graph-undirected expects direction-free weight keys, got '" + key +
                              "'");
        model_weights.emplace(m.name, WeightVector::load(registry, m.weights));
        break;
      }
      default:
        break;
    }
  }

  ExperimentResult result;
  result.dropped_records = filter_known(records, registry);
  result.split = make_split(records, config.split);

  std::vector<InteractionRecord> train = result.split.train;
  if (sample_seed || config.sample_fraction < 1.0)
    train = subsample_training(train, config.sample_fraction, sample_seed.value_or(config.seed));

  const HeterogeneousGraph graph = build_graph(train, registry);
  const InteractionMatrixView view(train, registry);

  const bool needs_graph = std::any_of(config.models.begin(), config.models.end(), [](const auto& m) {
    return m.kind != ModelKind::Popular && m.kind != ModelKind::UbKnn;
  });
  const WeightVector uniform =
      needs_graph ? WeightVector::uniform(registry) : WeightVector();

  for (const auto& m : config.models) {
    const TransitionMatrix* matrix_ptr = nullptr;
    TransitionMatrix matrix;
    switch (m.kind) {
      case ModelKind::Popular:
      case ModelKind::UbKnn:
        break;
      case ModelKind::GraphUniform:
        matrix = build_transition(graph, uniform);
        matrix_ptr = &matrix;
        break;
      default:
        matrix = build_transition(graph, model_weights.at(m.name));
        matrix_ptr = &matrix;
        break;
    }
    result.reports.push_back(
        detail::evaluate_model(m, config, graph, matrix_ptr, view, result.split.test));
  }
  return result;
}

/// CSV export `user_id,model,cutoff,rr,hit`, rows sorted by model order then
/// (user, cut, cutoff).
inline std::string per_user_csv(std::span<const ModelReport> reports) {
  std::string out = "user_id,model,cutoff,rr,hit\n";
  char buf[64];
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      for (int k : report.cutoffs) {
        std::snprintf(buf, sizeof(buf), "%.10g", row.rr.at(k));
        out += csv::escape_field(row.user_id) + "," + report.model + "," + std::to_string(k) + "," +
               buf + "," + std::to_string(row.hit.at(k)) + "\n";
      }
    }
  }
  return out;
}

struct GaRunOutput {
  std::uint64_t seed = 0;
  GaResult result;
};

struct OptimizeResult {
  std::vector<GaRunOutput> runs;
  Genome averaged;            // gene-wise mean of the runs' best genomes
  std::size_t skipped_validation_users = 0;
  int gene_count = 0;
};

/// Learns edge weights: the graph is built from the training records with
/// validation leakage removed, fitness is the validation ranking quality, and
/// the final weights average the best genomes of `opt_seeds` runs.
inline OptimizeResult optimize_weights(std::vector<InteractionRecord> records,
                                       const EdgeTypeRegistry& registry,
                                       const ExperimentConfig& config,
                                       const GaObserver& observer = {}) {
  filter_known(records, registry);
  const EvalSplit split = make_split(records, config.split);
  if (split.validation.empty())
    throw DataError("optimization requires a non-empty validation set");
  const std::vector<InteractionRecord> ga_train = split.validation_train();
  const HeterogeneousGraph graph = build_graph(ga_train, registry);

  FitnessContext context;
  context.graph = &graph;
  context.validation = split.validation;
  context.request_template.target_tag = config.target_tag;
  context.request_template.k = config.fitness_k;
  context.request_template.mode = config.mode;
  context.request_template.neighbor_count = config.neighbor_count;
  context.request_template.filters = config.filters;
  context.solver = config.solver;
  context.metric = config.fitness_metric;
  context.undirected = config.undirected;

  OptimizeResult out;
  out.gene_count = context.gene_count();
  evaluate_fitness(Genome(static_cast<std::size_t>(out.gene_count), 1.0), context,
                   &out.skipped_validation_users);  // surfaces data problems before the loop

  for (int run = 0; run < config.opt_seeds; ++run) {
    GaConfig ga = config.ga;
    ga.rng_seed = config.ga.rng_seed + static_cast<std::uint64_t>(run);
    GaRunOutput ro;
    ro.seed = ga.rng_seed;
    ro.result = evolve([&](const Genome& g) { return evaluate_fitness(g, context); }, ga,
                       out.gene_count, observer);
    out.runs.push_back(std::move(ro));
  }

  out.averaged.assign(static_cast<std::size_t>(out.gene_count), 0.0);
  for (const auto& run : out.runs)
    for (std::size_t i = 0; i < out.averaged.size(); ++i) out.averaged[i] += run.result.best[i];
  for (double& g : out.averaged) g /= static_cast<double>(out.runs.size());
  return out;
}

inline std::string history_csv(const GaResult& result) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  char buf[128];
  for (const auto& row : result.history) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g\n", row.generation, row.best_fitness,
                  row.mean_fitness);
    out += buf;
  }
  return out;
}

}  // namespace hetrec
