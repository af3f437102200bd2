#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/recommend.hpp"
#include "hetrec/schema.hpp"

namespace hetrec {

/// Binarized user-interaction view over the training records, for the
/// non-graph baselines. Vectors span all interaction types, not only the
/// recommendable tag.
class InteractionMatrixView {
 public:
  using ItemKey = std::pair<std::string, std::string>;  // (tag, id)

  InteractionMatrixView() = default;

  InteractionMatrixView(std::span<const InteractionRecord> records,
                        const EdgeTypeRegistry& registry) {
    const std::string& user_tag = registry.schema().user_tag;
    for (const auto& r : records) {
      const InteractionDef* def = registry.find_interaction(r.interaction);
      if (!def) throw DataError("unregistered interaction '" + r.interaction + "'");
      if (def->source_tag != user_tag) continue;  // object-object relations are not user interactions
      ItemKey key{def->target_tag, r.object_id};
      users_[r.user_id][r.interaction].insert(key);
      item_counts_[key] += 1;
    }
    for (auto& [user, by_interaction] : users_) {
      auto& all = profiles_[user];
      for (auto& [_, items] : by_interaction) all.insert(items.begin(), items.end());
    }
  }

  bool has_user(const std::string& user_id) const { return profiles_.count(user_id) != 0; }

  /// Binarized profile: every (tag, id) the user interacted with.
  const std::set<ItemKey>* profile(const std::string& user_id) const {
    auto it = profiles_.find(user_id);
    return it == profiles_.end() ? nullptr : &it->second;
  }

  /// Raw training interaction count per item.
  long item_count(const ItemKey& key) const {
    auto it = item_counts_.find(key);
    return it == item_counts_.end() ? 0 : it->second;
  }

  const std::map<ItemKey, long>& item_counts() const { return item_counts_; }
  const std::map<std::string, std::set<ItemKey>>& profiles() const { return profiles_; }

  /// Cosine similarity of two users' binarized interaction vectors:
  /// |A & B| / (sqrt(|A|) * sqrt(|B|)). Zero when either profile is empty.
  double cosine(const std::string& a, const std::string& b) const {
    const auto* pa = profile(a);
    const auto* pb = profile(b);
    if (!pa || !pb || pa->empty() || pb->empty()) return 0.0;
    std::size_t common = 0;
    const auto* small = pa->size() <= pb->size() ? pa : pb;
    const auto* large = pa->size() <= pb->size() ? pb : pa;
    for (const auto& k : *small) common += large->count(k);
    if (common == 0) return 0.0;
    return static_cast<double>(common) /
           (std::sqrt(static_cast<double>(pa->size())) * std::sqrt(static_cast<double>(pb->size())));
  }

  /// Filter context from the view (for users that may be absent from a graph).
  FilterContext filter_context(const std::string& user_id, const std::string& target_tag,
                               const std::vector<FilterRule>& rules) const {
    FilterContext ctx;
    auto uit = users_.find(user_id);
    if (uit == users_.end()) return ctx;
    for (const auto& [_, items] : uit->second)
      for (const auto& key : items)
        if (key.first == target_tag) ctx.owned_targets.insert(key.second);
    for (const auto& rule : rules) {
      if (rule.kind != FilterRule::Kind::ExcludeInteracted) continue;
      auto& set = ctx.excluded[&rule];
      for (const auto& name : rule.interactions) {
        auto iit = uit->second.find(name);
        if (iit == uit->second.end()) continue;
        for (const auto& key : iit->second)
          if (key.first == target_tag) set.insert(key.second);
      }
    }
    return ctx;
  }

 private:
  // user -> interaction -> items, plus the flattened binarized profile.
  std::map<std::string, std::map<std::string, std::set<ItemKey>>> users_;
  std::map<std::string, std::set<ItemKey>> profiles_;
  std::map<ItemKey, long> item_counts_;
};

/// Content of the requested tag ranked by global training interaction count
/// (ties by id ascending), filtered per the request.
inline RankedList most_popular(const InteractionMatrixView& view, const std::string& target_tag,
                               const RecommendationRequest& request) {
  request.validate();
  const FilterContext ctx = view.filter_context(request.user_id, target_tag, request.filters);
  struct Row {
    std::string id;
    long count;
  };
  std::vector<Row> rows;
  std::size_t candidates = 0;
  for (const auto& [key, count] : view.item_counts()) {
    if (key.first != target_tag) continue;
    ++candidates;
    if (!ctx.allows(request.filters, key.second)) continue;
    rows.push_back({key.second, count});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.id < b.id;
  });
  if (rows.size() > static_cast<std::size_t>(request.k)) rows.resize(static_cast<std::size_t>(request.k));
  RankedList out;
  out.empty_after_filter = rows.empty() && candidates > 0;
  out.items.reserve(rows.size());
  for (auto& r : rows) out.items.push_back({r.id, static_cast<double>(r.count)});
  return out;
}

/// User-based nearest neighbours on cosine similarity between binarized
/// interaction vectors; content ranked by neighbourhood interaction frequency.
/// Zero-similarity users are never neighbours; users without training
/// interactions (and users whose whole neighbourhood is empty) fall back to
/// most_popular.
inline RankedList ubknn_recommend(const InteractionMatrixView& view, const std::string& user_id,
                                  int k_neighbors, const RecommendationRequest& request) {
  request.validate();
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");

  const auto* own = view.profile(user_id);
  if (!own || own->empty()) {
    RankedList out = most_popular(view, request.target_tag, request);
    out.used_fallback = true;
    return out;
  }

  struct Neighbor {
    const std::string* id;
    double sim;
  };
  std::vector<Neighbor> sims;
  for (const auto& [other, profile] : view.profiles()) {
    if (other == user_id) continue;
    const double s = view.cosine(user_id, other);
    if (s > 0.0) sims.push_back({&other, s});
  }
  std::sort(sims.begin(), sims.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return *a.id < *b.id;
  });
  if (sims.size() > static_cast<std::size_t>(k_neighbors))
    sims.resize(static_cast<std::size_t>(k_neighbors));
  if (sims.empty()) {
    RankedList out = most_popular(view, request.target_tag, request);
    out.used_fallback = true;
    return out;
  }

  std::map<std::string, std::pair<long, double>> freq;  // id -> (count, summed sim)
  for (const auto& nb : sims) {
    for (const auto& key : *view.profile(*nb.id)) {
      if (key.first != request.target_tag) continue;
      auto& f = freq[key.second];
      f.first += 1;
      f.second += nb.sim;
    }
  }

  const FilterContext ctx = view.filter_context(user_id, request.target_tag, request.filters);
  struct Row {
    std::string id;
    long count;
    double sum_sim;
  };
  std::vector<Row> rows;
  for (auto& [id, f] : freq) {
    if (!ctx.allows(request.filters, id)) continue;
    rows.push_back({id, f.first, f.second});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.sum_sim != b.sum_sim) return a.sum_sim > b.sum_sim;
    return a.id < b.id;
  });
  RankedList out;
  out.empty_after_filter = rows.empty() && !freq.empty();
  if (rows.size() > static_cast<std::size_t>(request.k)) rows.resize(static_cast<std::size_t>(request.k));
  out.items.reserve(rows.size());
  for (auto& r : rows) out.items.push_back({r.id, static_cast<double>(r.count)});
  return out;
}

}  // namespace hetrec
