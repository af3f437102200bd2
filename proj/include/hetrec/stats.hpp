#pragma once

#include <map>
#include <set>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "hetrec/errors.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/schema.hpp"
#include "hetrec/split.hpp"

namespace hetrec {

struct DatasetStats {
  std::size_t user_count = 0;
  std::size_t object_count = 0;
  std::size_t interaction_count = 0;
  double sparsity = 0.0;  // 1 - interactions / (users * objects)
  std::map<std::string, std::size_t> per_interaction;
  std::map<std::string, std::size_t> per_tag_vertices;

  nlohmann::json to_json() const {
    return {{"users", user_count},
            {"objects", object_count},
            {"interactions", interaction_count},
            {"sparsity", sparsity},
            {"per_interaction", per_interaction},
            {"per_tag_vertices", per_tag_vertices}};
  }
};

/// Counts over the raw records: distinct user-tagged entities, distinct other
/// entities, and the standard implicit-feedback sparsity.
inline DatasetStats dataset_stats(std::span<const InteractionRecord> records,
                                  const EdgeTypeRegistry& registry) {
  if (records.empty()) throw DataError("dataset_stats: no records");
  const std::string& user_tag = registry.schema().user_tag;
  DatasetStats stats;
  std::set<std::pair<std::string, std::string>> users, objects;
  for (const auto& r : records) {
    const InteractionDef* def = registry.find_interaction(r.interaction);
    if (!def) throw DataError("unregistered interaction '" + r.interaction + "'");
    auto classify = [&](const std::string& tag, const std::string& id) {
      if (tag == user_tag)
        users.emplace(tag, id);
      else
        objects.emplace(tag, id);
    };
    classify(def->source_tag, r.user_id);
    classify(def->target_tag, r.object_id);
    stats.per_interaction[r.interaction] += 1;
  }
  std::set<std::pair<std::string, std::string>> all;
  all.insert(users.begin(), users.end());
  all.insert(objects.begin(), objects.end());
  for (const auto& [tag, _] : all) stats.per_tag_vertices[tag] += 1;

  stats.user_count = users.size();
  stats.object_count = objects.size();
  stats.interaction_count = records.size();
  const double denom = static_cast<double>(users.size()) * static_cast<double>(objects.size());
  stats.sparsity = denom == 0.0 ? 0.0
                                : 1.0 - static_cast<double>(records.size()) / denom;
  return stats;
}

/// Per-interaction counts across an evaluation split, mirroring the dataset
/// statistics tables: the training pool per interaction, plus the validation
/// and test case counts for the split's target interaction.
struct SplitStats {
  std::map<std::string, std::size_t> train_per_interaction;
  std::size_t validation_cases = 0;
  std::size_t test_cases = 0;

  nlohmann::json to_json() const {
    return {{"train_per_interaction", train_per_interaction},
            {"validation_cases", validation_cases},
            {"test_cases", test_cases}};
  }
};

inline SplitStats split_stats(const EvalSplit& split) {
  SplitStats s;
  for (const auto& r : split.validation_train()) s.train_per_interaction[r.interaction] += 1;
  s.validation_cases = split.validation.size();
  s.test_cases = split.test.size();
  return s;
}

}  // namespace hetrec
