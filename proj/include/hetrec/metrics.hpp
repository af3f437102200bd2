#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/recommend.hpp"

namespace hetrec {

namespace detail {
inline void check_metric_args(const std::set<std::string>& truth, int k) {
  if (k < 1) throw ConfigError("metric cutoff k must be >= 1");
  if (truth.empty()) throw DataError("empty ground-truth set");
}
}  // namespace detail

/// 1/rank of the first relevant item within the top k; 0 when none appears.
inline double reciprocal_rank_at_k(const std::vector<std::string>& ranked,
                                   const std::set<std::string>& truth, int k) {
  detail::check_metric_args(truth, k);
  const std::size_t limit = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < limit; ++i)
    if (truth.count(ranked[i])) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

/// 1 iff any relevant item appears in the top k.
inline int hit_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& truth,
                    int k) {
  detail::check_metric_args(truth, k);
  const std::size_t limit = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < limit; ++i)
    if (truth.count(ranked[i])) return 1;
  return 0;
}

/// Binary-relevance nDCG@k (ideal DCG over min(|truth|, k) relevant items).
inline double ndcg_at_k(const std::vector<std::string>& ranked, const std::set<std::string>& truth,
                        int k) {
  detail::check_metric_args(truth, k);
  const std::size_t limit = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t i = 0; i < limit; ++i)
    if (truth.count(ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  const std::size_t ideal = std::min<std::size_t>(truth.size(), static_cast<std::size_t>(k));
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

/// MAP@k contribution for one ranking: mean over min(|truth|, k) of the
/// precision at each relevant position.
inline double average_precision_at_k(const std::vector<std::string>& ranked,
                                     const std::set<std::string>& truth, int k) {
  detail::check_metric_args(truth, k);
  const std::size_t limit = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    if (truth.count(ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const std::size_t denom = std::min<std::size_t>(truth.size(), static_cast<std::size_t>(k));
  return denom == 0 ? 0.0 : sum / static_cast<double>(denom);
}

inline std::vector<std::string> ids_of(const RankedList& list) {
  std::vector<std::string> ids;
  ids.reserve(list.items.size());
  for (const auto& it : list.items) ids.push_back(it.id);
  return ids;
}

}  // namespace hetrec
