#pragma once

#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/ga.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/metrics.hpp"
#include "hetrec/ppr.hpp"
#include "hetrec/recommend.hpp"
#include "hetrec/split.hpp"
#include "hetrec/weights.hpp"

namespace hetrec {

enum class FitnessMetric { MRR, NDCG, MAP };

inline FitnessMetric fitness_metric_from_string(const std::string& s) {
  if (s == "mrr") return FitnessMetric::MRR;
  if (s == "ndcg") return FitnessMetric::NDCG;
  if (s == "map") return FitnessMetric::MAP;
  throw ConfigError("unknown fitness metric '" + s + "' (expected mrr|ndcg|map)");
}

/// Everything a genome needs to be scored: the (validation-leak-free) training
/// graph, the validation cases, and how recommendations are generated.
struct FitnessContext {
  const HeterogeneousGraph* graph = nullptr;
  std::vector<EvalCase> validation;
  RecommendationRequest request_template;  // user_id ignored; mode, k, filters used
  SolverConfig solver;
  FitnessMetric metric = FitnessMetric::MRR;
  bool undirected = false;

  int gene_count() const {
    return static_cast<int>(undirected ? graph->registry().interaction_names().size()
                                       : graph->registry().size());
  }
};

/// Component 2: the mean validation ranking quality of the recommender under
/// the genome's weights. Validation users missing from the training graph are
/// excluded from the mean; their count is reported via `skipped` when given.
inline double evaluate_fitness(const Genome& genome, const FitnessContext& context,
                               std::size_t* skipped = nullptr) {
  if (!context.graph) throw ConfigError("fitness context has no graph");
  if (context.validation.empty()) throw DataError("fitness undefined: empty validation set");
  const WeightVector weights =
      WeightVector::from_genes(context.graph->registry(), genome, context.undirected);
  const TransitionMatrix matrix = build_transition(*context.graph, weights);

  double sum = 0.0;
  std::size_t evaluated = 0, missing = 0;
  for (const EvalCase& c : context.validation) {
    RecommendationRequest request = context.request_template;
    request.user_id = c.user_id;
    RankedList list;
    try {
      list = recommend_with(matrix, *context.graph, request, context.solver);
    } catch (const UnknownUserError&) {
      ++missing;
      continue;
    }
    const auto ids = ids_of(list);
    switch (context.metric) {
      case FitnessMetric::MRR:
        sum += reciprocal_rank_at_k(ids, c.truth, request.k);
        break;
      case FitnessMetric::NDCG:
        sum += ndcg_at_k(ids, c.truth, request.k);
        break;
      case FitnessMetric::MAP:
        sum += average_precision_at_k(ids, c.truth, request.k);
        break;
    }
    ++evaluated;
  }
  if (skipped) *skipped = missing;
  if (evaluated == 0) throw DataError("fitness undefined: no validation user present in the graph");
  return sum / static_cast<double>(evaluated);
}

}  // namespace hetrec
