#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetrec/errors.hpp"

namespace hetrec {

enum class Direction : std::uint8_t { Out, In };

inline std::string_view to_string(Direction d) { return d == Direction::Out ? "out" : "in"; }

inline Direction direction_from_string(std::string_view s) {
  if (s == "out") return Direction::Out;
  if (s == "in") return Direction::In;
  throw DataError("invalid direction: '" + std::string(s) + "' (expected 'out' or 'in')");
}

/// One interaction kind as declared in the schema: who acts on what, and
/// whether the reverse edge is materialized (two_way) or suppressed.
struct InteractionDef {
  std::string name;
  std::string source_tag;
  std::string target_tag;
  bool two_way = true;
};

/// Vertex-tag registry plus interaction declarations. Loaded from a JSON
/// document; the registry of edge types is derived from it.
struct InteractionSchema {
  std::string user_tag = "user";
  std::vector<std::string> tags;
  std::vector<InteractionDef> interactions;

  static InteractionSchema from_json(const nlohmann::json& j) {
    InteractionSchema s;
    if (!j.is_object()) throw DataError("schema: top-level JSON object expected");
    s.user_tag = j.value("user_tag", std::string("user"));
    if (j.contains("tags"))
      for (const auto& t : j.at("tags")) s.tags.push_back(t.get<std::string>());
    if (j.contains("interactions")) {
      for (const auto& d : j.at("interactions")) {
        InteractionDef def;
        def.name = d.at("name").get<std::string>();
        def.source_tag = d.at("source").get<std::string>();
        def.target_tag = d.at("target").get<std::string>();
        def.two_way = d.value("two_way", true);
        s.interactions.push_back(std::move(def));
      }
    }
    return s;
  }

  static InteractionSchema load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema: " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    return from_json(j);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["user_tag"] = user_tag;
    j["tags"] = tags;
    auto& arr = j["interactions"] = nlohmann::json::array();
    for (const auto& d : interactions)
      arr.push_back({{"name", d.name}, {"source", d.source_tag}, {"target", d.target_tag},
                     {"two_way", d.two_way}});
    return j;
  }
};

/// Base edge type: one interaction in one direction. Out is the actor-to-object
/// edge, In the mirrored object-to-actor edge.
struct EdgeType {
  std::string interaction;
  Direction direction = Direction::Out;

  std::string label() const { return interaction + ":" + std::string(to_string(direction)); }
  friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

using EdgeTypeId = std::uint32_t;

/// The set R of base edge types, in canonical order (interaction name
/// ascending, Out before In). Built by register_schema; immutable afterwards.
class EdgeTypeRegistry {
 public:
  EdgeTypeRegistry() = default;

  const std::vector<EdgeType>& types() const { return types_; }
  std::size_t size() const { return types_.size(); }
  const EdgeType& type(EdgeTypeId id) const { return types_.at(id); }

  std::optional<EdgeTypeId> find(std::string_view interaction, Direction d) const {
    auto it = index_.find(key(interaction, d));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const InteractionDef* find_interaction(std::string_view name) const {
    auto it = defs_.find(std::string(name));
    return it == defs_.end() ? nullptr : &it->second;
  }

  /// Interaction names in canonical (sorted) order; the undirected genome layout.
  const std::vector<std::string>& interaction_names() const { return names_; }

  const InteractionSchema& schema() const { return schema_; }

  friend EdgeTypeRegistry register_schema(const InteractionSchema& schema);

 private:
  static std::string key(std::string_view interaction, Direction d) {
    return std::string(interaction) + ":" + std::string(to_string(d));
  }

  InteractionSchema schema_;
  std::vector<EdgeType> types_;
  std::map<std::string, EdgeTypeId> index_;
  std::map<std::string, InteractionDef> defs_;
  std::vector<std::string> names_;
};

/// Expands interaction declarations into the edge-type registry: two types per
/// two-way interaction, one Out type for one-way ones.
inline EdgeTypeRegistry register_schema(const InteractionSchema& schema) {
  EdgeTypeRegistry reg;
  reg.schema_ = schema;

  std::set<std::string> tag_set;
  for (const auto& t : schema.tags) {
    if (t.empty()) throw DataError("schema: empty tag name");
    if (!tag_set.insert(t).second) throw DataError("schema: duplicate tag '" + t + "'");
  }
  if (schema.user_tag.empty()) throw DataError("schema: empty user_tag");
  if (!(schema.tags.empty() && schema.interactions.empty()) && !tag_set.count(schema.user_tag))
    throw DataError("schema: user_tag '" + schema.user_tag + "' not in tag registry");

  for (const auto& def : schema.interactions) {
    if (def.name.empty()) throw DataError("schema: empty interaction name");
    if (!reg.defs_.emplace(def.name, def).second)
      throw DataError("schema: duplicate interaction '" + def.name + "'");
    if (!tag_set.count(def.source_tag))
      throw DataError("schema: interaction '" + def.name + "' references unknown tag '" +
                      def.source_tag + "'");
    if (!tag_set.count(def.target_tag))
      throw DataError("schema: interaction '" + def.name + "' references unknown tag '" +
                      def.target_tag + "'");
    reg.names_.push_back(def.name);
  }
  std::sort(reg.names_.begin(), reg.names_.end());

  for (const auto& name : reg.names_) {
    const auto& def = reg.defs_.at(name);
    reg.types_.push_back({name, Direction::Out});
    if (def.two_way) reg.types_.push_back({name, Direction::In});
  }
  for (EdgeTypeId i = 0; i < reg.types_.size(); ++i)
    reg.index_.emplace(reg.types_[i].label(), i);
  return reg;
}

}  // namespace hetrec
