#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/ppr.hpp"
#include "hetrec/weights.hpp"

namespace hetrec {

/// Eligibility rule applied to candidate items before ranking.
struct FilterRule {
  enum class Kind { ExcludeInteracted, RequirePrerequisite };
  Kind kind = Kind::ExcludeInteracted;
  std::set<std::string> interactions;                  // ExcludeInteracted
  std::map<std::string, std::string> prerequisite;     // item id -> required base item id

  static FilterRule exclude_interacted(std::set<std::string> interactions) {
    FilterRule r;
    r.kind = Kind::ExcludeInteracted;
    r.interactions = std::move(interactions);
    return r;
  }
  static FilterRule require_prerequisite(std::map<std::string, std::string> prereq) {
    FilterRule r;
    r.kind = Kind::RequirePrerequisite;
    r.prerequisite = std::move(prereq);
    validate_acyclic(r.prerequisite);
    return r;
  }

  static void validate_acyclic(const std::map<std::string, std::string>& prereq) {
    for (const auto& [start, _] : prereq) {
      std::set<std::string> seen{start};
      auto it = prereq.find(start);
      while (it != prereq.end()) {
        if (!seen.insert(it->second).second)
          throw ConfigError("prerequisite map contains a cycle through '" + start + "'");
        it = prereq.find(it->second);
      }
    }
  }
};

enum class RecMode { DirectRank, NeighborFrequency };

struct RecommendationRequest {
  std::string user_id;
  std::string target_tag;
  int k = 10;
  RecMode mode = RecMode::DirectRank;
  int neighbor_count = 90;  // NeighborFrequency only
  std::vector<FilterRule> filters;

  void validate() const {
    if (k < 1) throw ConfigError("cutoff k must be >= 1");
    if (mode == RecMode::NeighborFrequency && neighbor_count < 1)
      throw ConfigError("neighbor count must be >= 1");
  }
};

struct ScoredItem {
  std::string id;
  double score = 0.0;
};

struct RankedList {
  std::vector<ScoredItem> items;
  bool empty_after_filter = false;  // candidates existed but every one was filtered
  bool used_fallback = false;       // produced by the popularity fallback path
};

/// Per-user eligibility state resolved from training data: ids the user
/// reached via given interactions, and all target-tag ids the user touched.
struct FilterContext {
  std::map<const FilterRule*, std::set<std::string>> excluded;  // per ExcludeInteracted rule
  std::set<std::string> owned_targets;                          // for RequirePrerequisite

  bool allows(const std::vector<FilterRule>& rules, const std::string& id) const {
    for (const auto& rule : rules) {
      if (rule.kind == FilterRule::Kind::ExcludeInteracted) {
        auto it = excluded.find(&rule);
        if (it != excluded.end() && it->second.count(id)) return false;
      } else {
        auto p = rule.prerequisite.find(id);
        if (p != rule.prerequisite.end() && !owned_targets.count(p->second)) return false;
      }
    }
    return true;
  }
};

/// Builds the filter context from the training graph: the user's out-edges
/// define what they interacted with.
inline FilterContext filter_context_from_graph(const HeterogeneousGraph& graph, VertexIndex user,
                                               const std::string& target_tag,
                                               const std::vector<FilterRule>& rules) {
  FilterContext ctx;
  for (const OutEdge& e : graph.out_neighbors(user)) {
    const Vertex& v = graph.vertex(e.target);
    if (v.tag == target_tag) ctx.owned_targets.insert(v.id);
  }
  for (const auto& rule : rules) {
    if (rule.kind != FilterRule::Kind::ExcludeInteracted) continue;
    auto& set = ctx.excluded[&rule];
    for (const OutEdge& e : graph.out_neighbors(user))
      if (graph.type_has_out_interaction(e.type, rule.interactions))
        set.insert(graph.vertex(e.target).id);
  }
  return ctx;
}

namespace detail {

inline void sort_and_truncate(std::vector<ScoredItem>& items, int k) {
  std::sort(items.begin(), items.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (items.size() > static_cast<std::size_t>(k)) items.resize(static_cast<std::size_t>(k));
}

inline VertexIndex require_user(const HeterogeneousGraph& graph, const std::string& user_id) {
  auto idx = graph.find_vertex(graph.registry().schema().user_tag, user_id);
  if (!idx) throw UnknownUserError(user_id);
  return *idx;
}

}  // namespace detail

/// Direct mode on a prebuilt transition matrix: rank target-tag vertices by
/// their PPR score from the user.
inline RankedList recommend_direct_with(const TransitionMatrix& matrix,
                                        const HeterogeneousGraph& graph,
                                        const RecommendationRequest& request,
                                        const SolverConfig& solver) {
  request.validate();
  const VertexIndex user = detail::require_user(graph, request.user_id);
  const ScoreVector pi = personalized_pagerank(matrix, user, solver);
  if (!pi.converged)
    throw ComputeError("PPR did not converge for user '" + request.user_id + "' (residual " +
                       std::to_string(pi.residual) + ")");

  const FilterContext ctx = filter_context_from_graph(graph, user, request.target_tag, request.filters);
  const auto candidates = graph.vertices_with_tag(request.target_tag);
  RankedList out;
  out.items.reserve(candidates.size());
  for (VertexIndex v : candidates) {
    if (v == user) continue;
    const std::string& id = graph.vertex(v).id;
    if (!ctx.allows(request.filters, id)) continue;
    out.items.push_back({id, pi.scores[v]});
  }
  out.empty_after_filter = out.items.empty() && !candidates.empty();
  detail::sort_and_truncate(out.items, request.k);
  return out;
}

/// Neighbor mode on a prebuilt transition matrix: take the N user vertices
/// closest by PPR, then rank target-tag content by how many of them interacted
/// with it (ties by summed neighbor score, then id).
inline RankedList recommend_via_neighbors_with(const TransitionMatrix& matrix,
                                               const HeterogeneousGraph& graph,
                                               const RecommendationRequest& request,
                                               const SolverConfig& solver) {
  request.validate();
  const VertexIndex user = detail::require_user(graph, request.user_id);
  const ScoreVector pi = personalized_pagerank(matrix, user, solver);
  if (!pi.converged)
    throw ComputeError("PPR did not converge for user '" + request.user_id + "' (residual " +
                       std::to_string(pi.residual) + ")");

  const std::string& user_tag = graph.registry().schema().user_tag;
  std::vector<VertexIndex> neighbors;
  for (VertexIndex v : graph.vertices_with_tag(user_tag))
    if (v != user) neighbors.push_back(v);
  std::sort(neighbors.begin(), neighbors.end(), [&](VertexIndex a, VertexIndex b) {
    if (pi.scores[a] != pi.scores[b]) return pi.scores[a] > pi.scores[b];
    return graph.vertex(a).id < graph.vertex(b).id;
  });
  if (neighbors.size() > static_cast<std::size_t>(request.neighbor_count))
    neighbors.resize(static_cast<std::size_t>(request.neighbor_count));

  // Interaction frequency over the selected neighborhood; each (neighbor,
  // item) pair counts once, mirroring graph deduplication.
  std::map<std::string, std::pair<long, double>> freq;  // id -> (count, summed pi)
  for (VertexIndex nb : neighbors) {
    for (const OutEdge& e : graph.out_neighbors(nb)) {
      const Vertex& v = graph.vertex(e.target);
      if (v.tag != request.target_tag) continue;
      auto& f = freq[v.id];
      f.first += 1;
      f.second += pi.scores[nb];
    }
  }

  const FilterContext ctx = filter_context_from_graph(graph, user, request.target_tag, request.filters);
  struct Row {
    std::string id;
    long count;
    double sum_pi;
  };
  std::vector<Row> rows;
  rows.reserve(freq.size());
  for (auto& [id, f] : freq) {
    if (!ctx.allows(request.filters, id)) continue;
    rows.push_back({id, f.first, f.second});
  }
  RankedList out;
  out.empty_after_filter = rows.empty() && !freq.empty();
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.sum_pi != b.sum_pi) return a.sum_pi > b.sum_pi;
    return a.id < b.id;
  });
  if (rows.size() > static_cast<std::size_t>(request.k)) rows.resize(static_cast<std::size_t>(request.k));
  out.items.reserve(rows.size());
  for (auto& r : rows) out.items.push_back({r.id, static_cast<double>(r.count)});
  return out;
}

inline RankedList recommend_direct(const HeterogeneousGraph& graph, const WeightVector& weights,
                                   const RecommendationRequest& request, const SolverConfig& solver) {
  return recommend_direct_with(build_transition(graph, weights), graph, request, solver);
}

inline RankedList recommend_via_neighbors(const HeterogeneousGraph& graph,
                                          const WeightVector& weights,
                                          const RecommendationRequest& request,
                                          const SolverConfig& solver) {
  return recommend_via_neighbors_with(build_transition(graph, weights), graph, request, solver);
}

/// Dispatch on the request's mode.
inline RankedList recommend(const HeterogeneousGraph& graph, const WeightVector& weights,
                            const RecommendationRequest& request, const SolverConfig& solver) {
  return request.mode == RecMode::DirectRank
             ? recommend_direct(graph, weights, request, solver)
             : recommend_via_neighbors(graph, weights, request, solver);
}

inline RankedList recommend_with(const TransitionMatrix& matrix, const HeterogeneousGraph& graph,
                                 const RecommendationRequest& request, const SolverConfig& solver) {
  return request.mode == RecMode::DirectRank
             ? recommend_direct_with(matrix, graph, request, solver)
             : recommend_via_neighbors_with(matrix, graph, request, solver);
}

}  // namespace hetrec
