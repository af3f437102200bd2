#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/parallel.hpp"
#include "hetrec/weights.hpp"

namespace hetrec {

struct SolverConfig {
  double alpha = 0.3;       // termination probability of the discounted walk
  double tolerance = 1e-8;  // L1 residual stop criterion
  int max_iterations = 200;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  }
};

/// Row-stochastic transition structure P over the weighted graph. Rows of
/// dangling vertices (no out-edges) are empty and flagged; the solver returns
/// their walk mass to the source.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;

  std::size_t size() const { return n_; }

  struct Entry {
    VertexIndex target;
    double probability;
  };

  std::span<const Entry> row(VertexIndex i) const {
    return {entries_.data() + row_ptr_.at(i), row_ptr_.at(i + 1) - row_ptr_.at(i)};
  }

  bool dangling(VertexIndex i) const { return dangling_[i] != 0; }
  const std::vector<std::uint8_t>& dangling_flags() const { return dangling_; }

  friend TransitionMatrix build_transition(const HeterogeneousGraph& graph,
                                           const WeightVector& weights);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> row_ptr_;
  std::vector<Entry> entries_;
  std::vector<std::uint8_t> dangling_;
};

/// p_{i,j} = w_{i,j} / sum_k w_{i,k} over each vertex's out-edges.
inline TransitionMatrix build_transition(const HeterogeneousGraph& graph,
                                         const WeightVector& weights) {
  TransitionMatrix m;
  m.n_ = graph.vertex_count();
  m.row_ptr_.assign(m.n_ + 1, 0);

  // Resolve each edge-type id once; every table entry is referenced by some edge.
  std::vector<double> type_weight(graph.type_table().size());
  for (std::size_t t = 0; t < graph.type_table().size(); ++t)
    type_weight[t] = resolve_weight(graph.type_table()[t], weights);

  m.entries_.resize(graph.edge_count());
  m.dangling_.assign(m.n_, 0);
  std::size_t pos = 0;
  for (VertexIndex i = 0; i < m.n_; ++i) {
    const auto row = graph.out_neighbors(i);
    if (row.empty()) {
      m.dangling_[i] = 1;
      m.row_ptr_[i + 1] = static_cast<std::uint32_t>(pos);
      continue;
    }
    double row_sum = 0.0;
    for (const OutEdge& e : row) row_sum += type_weight[e.type];
    for (const OutEdge& e : row)
      m.entries_[pos++] = {e.target, type_weight[e.type] / row_sum};
    m.row_ptr_[i + 1] = static_cast<std::uint32_t>(pos);
  }
  return m;
}

/// Steady-state distribution of the alpha-discounted walk from `source`:
/// probability the walk terminates at each vertex.
struct ScoreVector {
  std::vector<double> scores;
  VertexIndex source = 0;
  double alpha = 0.0;
  int iterations_used = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Power iteration on pi = alpha*e_s + (1-alpha)*(P^T pi + dangling_mass*e_s),
/// starting from pi = e_s, until the L1 step difference drops below tolerance
/// or max_iterations is reached. Non-convergence is reported on the result,
/// not thrown.
inline ScoreVector personalized_pagerank(const TransitionMatrix& matrix, VertexIndex source,
                                         const SolverConfig& config) {
  config.validate();
  const std::size_t n = matrix.size();
  if (source >= n) throw ConfigError("source vertex index out of range");

  ScoreVector result;
  result.source = source;
  result.alpha = config.alpha;
  std::vector<double> cur(n, 0.0), next(n, 0.0);
  cur[source] = 1.0;

  const double alpha = config.alpha;
  const double keep = 1.0 - alpha;
  for (int it = 0; it < config.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling_mass = 0.0;
    for (VertexIndex i = 0; i < n; ++i) {
      const double mass = cur[i];
      if (mass == 0.0) continue;
      if (matrix.dangling(i)) {
        dangling_mass += mass;
        continue;
      }
      const double push = keep * mass;
      for (const auto& e : matrix.row(i)) next[e.target] += push * e.probability;
    }
    next[source] += alpha + keep * dangling_mass;

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - cur[i]);
    cur.swap(next);
    result.iterations_used = it + 1;
    result.residual = residual;
    if (residual < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(cur);
  // Restart mass never leaves the source below alpha; holds exactly by the
  // update equation.
  if (result.scores[source] < alpha)
    throw ComputeError("restart-mass invariant violated at source " + std::to_string(source));
  return result;
}

/// Element-wise personalized_pagerank over many sources; order preserved and
/// results bit-identical to sequential execution. Errors carry the offending
/// source index.
inline std::vector<ScoreVector> batch_pagerank(const TransitionMatrix& matrix,
                                               std::span<const VertexIndex> sources,
                                               const SolverConfig& config) {
  config.validate();
  std::vector<ScoreVector> results(sources.size());
  parallel_for(sources.size(), [&](std::size_t i) {
    try {
      results[i] = personalized_pagerank(matrix, sources[i], config);
    } catch (const std::exception& e) {
      throw ComputeError("source[" + std::to_string(i) + "]=" + std::to_string(sources[i]) + ": " +
                         e.what());
    }
  });
  return results;
}

}  // namespace hetrec
