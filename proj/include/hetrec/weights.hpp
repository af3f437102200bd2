#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetrec/errors.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/schema.hpp"

namespace hetrec {

/// The weight function W: one positive real per base edge type, stored in the
/// registry's canonical order. Entries never set stay NaN and fail resolution.
class WeightVector {
 public:
  WeightVector() = default;

  static WeightVector uniform(const EdgeTypeRegistry& registry, double value = 1.0) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw DataError("weight must be positive and finite");
    WeightVector w;
    w.w_.assign(registry.size(), value);
    return w;
  }

  /// Keys are either "<interaction>:<out|in>" or a bare "<interaction>", which
  /// assigns every direction the interaction has (the undirected layout).
  static WeightVector from_map(const EdgeTypeRegistry& registry,
                               const std::map<std::string, double>& entries) {
    WeightVector w;
    w.w_.assign(registry.size(), std::numeric_limits<double>::quiet_NaN());
    auto assign = [&](EdgeTypeId id, double value, const std::string& key) {
      if (!(value > 0.0) || !std::isfinite(value))
        throw DataError("weight for '" + key + "' must be positive and finite");
      if (!std::isnan(w.w_[id]))
        throw DataError("weight for '" + registry.type(id).label() + "' assigned twice");
      w.w_[id] = value;
    };
    for (const auto& [key, value] : entries) {
      auto colon = key.find(':');
      if (colon == std::string::npos) {
        if (!registry.find_interaction(key))
          throw DataError("weight file: unknown interaction '" + key + "'");
        bool any = false;
        for (Direction d : {Direction::Out, Direction::In})
          if (auto id = registry.find(key, d)) assign(*id, value, key), any = true;
        if (!any) throw DataError("weight file: no edge types for '" + key + "'");
      } else {
        const std::string name = key.substr(0, colon);
        const Direction d = direction_from_string(key.substr(colon + 1));
        auto id = registry.find(name, d);
        if (!id) throw DataError("weight file: unknown edge type '" + key + "'");
        assign(*id, value, key);
      }
    }
    return w;
  }

  static WeightVector load(const EdgeTypeRegistry& registry, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weight file: " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw DataError(path.string() + ": JSON object expected");
    std::map<std::string, double> entries;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number()) throw DataError(path.string() + ": weight '" + k + "' is not a number");
      entries[k] = v.get<double>();
    }
    try {
      return from_map(registry, entries);
    } catch (const DataError& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }

  /// Builds the weight function from a GA genome. Directed genomes carry one
  /// gene per edge type in registry order; undirected genomes one gene per
  /// interaction (sorted), applied to every direction the interaction has.
  static WeightVector from_genes(const EdgeTypeRegistry& registry, std::span<const double> genes,
                                 bool undirected) {
    WeightVector w;
    if (undirected) {
      const auto& names = registry.interaction_names();
      if (genes.size() != names.size())
        throw ConfigError("undirected genome length " + std::to_string(genes.size()) +
                          " != interaction count " + std::to_string(names.size()));
      w.w_.assign(registry.size(), std::numeric_limits<double>::quiet_NaN());
      for (std::size_t i = 0; i < names.size(); ++i)
        for (Direction d : {Direction::Out, Direction::In})
          if (auto id = registry.find(names[i], d)) w.w_[*id] = genes[i];
    } else {
      if (genes.size() != registry.size())
        throw ConfigError("genome length " + std::to_string(genes.size()) +
                          " != edge type count " + std::to_string(registry.size()));
      w.w_.assign(genes.begin(), genes.end());
    }
    for (double v : w.w_)
      if (!(v > 0.0) || !std::isfinite(v)) throw DataError("gene weights must be positive");
    return w;
  }

  double base_weight(EdgeTypeId id) const { return w_.at(id); }
  std::size_t size() const { return w_.size(); }

  WeightVector scaled(double c) const {
    WeightVector w = *this;
    for (double& v : w.w_) v *= c;
    return w;
  }

  nlohmann::json to_json(const EdgeTypeRegistry& registry) const {
    nlohmann::json j = nlohmann::json::object();
    for (EdgeTypeId i = 0; i < w_.size(); ++i)
      if (!std::isnan(w_[i])) j[registry.type(i).label()] = w_[i];
    return j;
  }

 private:
  std::vector<double> w_;
};

/// W(phi(e)): a plain type's weight, or the sum of the constituent weights for
/// a combined type.
inline double resolve_weight(const EdgeTypeEntry& entry, const WeightVector& weights) {
  double sum = 0.0;
  for (EdgeTypeId part : entry.parts) {
    const double w = weights.base_weight(part);
    if (std::isnan(w)) throw DataError("missing weight entry for edge type part in '" + entry.label + "'");
    if (!(w > 0.0)) throw DataError("non-positive weight for '" + entry.label + "'");
    sum += w;
  }
  return sum;
}

}  // namespace hetrec
