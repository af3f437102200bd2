#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/schema.hpp"

namespace hetrec {

using VertexIndex = std::uint32_t;

struct Vertex {
  std::string id;
  std::string tag;

  std::string key() const { return tag + "/" + id; }
};

/// Resolved type of one stored edge: an ordered set of base edge-type ids.
/// A single-element entry is a plain base type; multi-element entries are the
/// combined types created when distinct interactions connect the same ordered
/// vertex pair (their weight is the sum of the parts).
struct EdgeTypeEntry {
  std::vector<EdgeTypeId> parts;  // sorted ascending, size >= 1
  std::string label;              // e.g. "create_post:out+like_post:out"
};

struct OutEdge {
  VertexIndex target;
  std::uint32_t type;  // index into the graph's edge-type table
};

/// Immutable directed typed graph compiled from interaction records.
/// Vertex indices are assigned by sorted (tag, id); out-adjacency is CSR with
/// targets ascending within each row.
class HeterogeneousGraph {
 public:
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Vertex& vertex(VertexIndex i) const { return vertices_.at(i); }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  std::optional<VertexIndex> find_vertex(std::string_view tag, std::string_view id) const {
    auto it = by_key_.find(std::string(tag) + "/" + std::string(id));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  /// Vertices carrying the given tag, as a contiguous index range (vertices
  /// are sorted by tag first).
  std::span<const VertexIndex> vertices_with_tag(std::string_view tag) const {
    auto it = tag_index_.find(std::string(tag));
    if (it == tag_index_.end()) return {};
    return {tag_order_.data() + it->second.first, it->second.second - it->second.first};
  }

  std::span<const OutEdge> out_neighbors(VertexIndex i) const {
    return {edges_.data() + row_ptr_.at(i), row_ptr_.at(i + 1) - row_ptr_.at(i)};
  }

  std::size_t out_degree(VertexIndex i) const { return row_ptr_.at(i + 1) - row_ptr_.at(i); }
  std::size_t in_degree(VertexIndex i) const { return in_degree_.at(i); }

  const std::vector<EdgeTypeEntry>& type_table() const { return type_table_; }
  const EdgeTypeEntry& edge_type(std::uint32_t t) const { return type_table_.at(t); }

  const EdgeTypeRegistry& registry() const { return registry_; }

  /// True if the type of edge (given by table index) includes any of the named
  /// interactions in the Out direction, i.e. the edge records the source
  /// acting on the target via one of them.
  bool type_has_out_interaction(std::uint32_t t, const std::set<std::string>& interactions) const {
    for (EdgeTypeId part : type_table_.at(t).parts) {
      const EdgeType& base = registry_.type(part);
      if (base.direction == Direction::Out && interactions.count(base.interaction)) return true;
    }
    return false;
  }

  /// Line-oriented canonical serialization for golden tests:
  /// `edge <src_tag>/<src_id> <dst_tag>/<dst_id> <edge_type>`, lines sorted
  /// lexicographically.
  std::string canonical_dump() const {
    std::vector<std::string> lines;
    lines.reserve(edges_.size());
    for (VertexIndex u = 0; u < vertices_.size(); ++u)
      for (const OutEdge& e : out_neighbors(u))
        lines.push_back("edge " + vertices_[u].key() + " " + vertices_[e.target].key() + " " +
                        type_table_[e.type].label);
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }

  friend HeterogeneousGraph build_graph(std::span<const InteractionRecord> records,
                                        const EdgeTypeRegistry& registry);

 private:
  EdgeTypeRegistry registry_;
  std::vector<Vertex> vertices_;
  std::unordered_map<std::string, VertexIndex> by_key_;
  std::vector<std::uint32_t> row_ptr_;
  std::vector<OutEdge> edges_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<EdgeTypeEntry> type_table_;
  std::vector<VertexIndex> tag_order_;  // == identity; kept for span stability
  std::map<std::string, std::pair<std::size_t, std::size_t>> tag_index_;  // tag -> [begin,end)
};

/// Validates records against the registry without modifying them: interactions
/// must be registered, the object tag must match the declaration, and
/// self-edges (same tag and id on both sides) are rejected. Fills the
/// symmetric field from the schema. `context` prefixes error messages.
inline void bind_records(std::span<InteractionRecord> records, const EdgeTypeRegistry& registry,
                         const std::string& context = "") {
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    const std::string where = context + "record " + std::to_string(i + 1) + ": ";
    const InteractionDef* def = registry.find_interaction(r.interaction);
    if (!def) throw DataError(where + "unregistered interaction '" + r.interaction + "'");
    if (r.object_tag != def->target_tag)
      throw DataError(where + "object tag '" + r.object_tag + "' does not match schema target '" +
                      def->target_tag + "' for interaction '" + r.interaction + "'");
    if (def->source_tag == def->target_tag && r.user_id == r.object_id)
      throw DataError(where + "self-loop: '" + r.user_id + "' interacting with itself");
    r.symmetric = def->two_way;
  }
}

/// Drops records whose interaction is not registered or whose tag conflicts
/// with the schema; the evaluation harness uses this before building. Returns
/// the number of dropped records.
inline std::size_t filter_known(std::vector<InteractionRecord>& records,
                                const EdgeTypeRegistry& registry) {
  auto keep = [&](const InteractionRecord& r) {
    const InteractionDef* def = registry.find_interaction(r.interaction);
    if (!def) return false;
    if (r.object_tag != def->target_tag) return false;
    if (def->source_tag == def->target_tag && r.user_id == r.object_id) return false;
    return true;
  };
  const std::size_t before = records.size();
  std::erase_if(records, [&](const InteractionRecord& r) { return !keep(r); });
  return before - records.size();
}

/// Compiles records into the graph. One vertex per distinct (tag, id); one Out
/// edge actor->object per record plus the mirrored In edge for two-way
/// interactions; duplicate identical interactions collapse to one edge;
/// distinct interactions on the same ordered pair collapse into a combined
/// edge type.
inline HeterogeneousGraph build_graph(std::span<const InteractionRecord> records,
                                      const EdgeTypeRegistry& registry) {
  HeterogeneousGraph g;
  g.registry_ = registry;

  // Base types seed the table so edge-type ids below registry.size() coincide
  // with registry ids.
  for (EdgeTypeId i = 0; i < registry.size(); ++i)
    g.type_table_.push_back({{i}, registry.type(i).label()});

  struct RawEdge {
    std::string src_key, dst_key;
    EdgeTypeId type;
  };
  std::vector<RawEdge> raw;
  raw.reserve(records.size() * 2);
  std::set<std::pair<std::string, std::string>> vertex_keys;  // (tag, id)

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "record " + std::to_string(i + 1) + ": ";
    const InteractionDef* def = registry.find_interaction(r.interaction);
    if (!def) throw DataError(where + "unregistered interaction '" + r.interaction + "'");
    if (r.object_tag != def->target_tag)
      throw DataError(where + "object tag '" + r.object_tag + "' does not match schema target '" +
                      def->target_tag + "' for interaction '" + r.interaction + "'");
    if (def->source_tag == def->target_tag && r.user_id == r.object_id)
      throw DataError(where + "self-loop: '" + r.user_id + "' interacting with itself");

    const std::string src = def->source_tag + "/" + r.user_id;
    const std::string dst = def->target_tag + "/" + r.object_id;
    vertex_keys.emplace(def->source_tag, r.user_id);
    vertex_keys.emplace(def->target_tag, r.object_id);

    raw.push_back({src, dst, *registry.find(r.interaction, Direction::Out)});
    if (def->two_way) raw.push_back({dst, src, *registry.find(r.interaction, Direction::In)});
  }

  // Vertex indices by sorted (tag, id).
  g.vertices_.reserve(vertex_keys.size());
  for (const auto& [tag, id] : vertex_keys) g.vertices_.push_back({id, tag});
  for (VertexIndex i = 0; i < g.vertices_.size(); ++i) g.by_key_.emplace(g.vertices_[i].key(), i);

  // Tag index: contiguous ranges over the sorted vertex order.
  g.tag_order_.resize(g.vertices_.size());
  for (VertexIndex i = 0; i < g.vertices_.size(); ++i) g.tag_order_[i] = i;
  for (std::size_t begin = 0; begin < g.vertices_.size();) {
    std::size_t end = begin;
    while (end < g.vertices_.size() && g.vertices_[end].tag == g.vertices_[begin].tag) ++end;
    g.tag_index_.emplace(g.vertices_[begin].tag, std::make_pair(begin, end));
    begin = end;
  }

  // Deduplicate and merge per ordered pair.
  std::vector<std::tuple<VertexIndex, VertexIndex, EdgeTypeId>> triples;
  triples.reserve(raw.size());
  for (const auto& e : raw)
    triples.emplace_back(g.by_key_.at(e.src_key), g.by_key_.at(e.dst_key), e.type);
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  std::map<std::vector<EdgeTypeId>, std::uint32_t> composite_ids;
  g.row_ptr_.assign(g.vertices_.size() + 1, 0);
  g.in_degree_.assign(g.vertices_.size(), 0);

  std::vector<std::pair<std::pair<VertexIndex, VertexIndex>, std::uint32_t>> merged;
  for (std::size_t i = 0; i < triples.size();) {
    const auto [u, v, first_type] = triples[i];
    std::vector<EdgeTypeId> parts;
    std::size_t j = i;
    while (j < triples.size() && std::get<0>(triples[j]) == u && std::get<1>(triples[j]) == v)
      parts.push_back(std::get<2>(triples[j])), ++j;
    i = j;
    std::uint32_t type_id;
    if (parts.size() == 1) {
      type_id = parts[0];
    } else {
      auto it = composite_ids.find(parts);
      if (it != composite_ids.end()) {
        type_id = it->second;
      } else {
        std::string label;
        for (std::size_t p = 0; p < parts.size(); ++p) {
          if (p) label += '+';
          label += registry.type(parts[p]).label();
        }
        type_id = static_cast<std::uint32_t>(g.type_table_.size());
        g.type_table_.push_back({parts, std::move(label)});
        composite_ids.emplace(std::move(parts), type_id);
      }
    }
    merged.push_back({{u, v}, type_id});
  }

  for (const auto& [uv, t] : merged) {
    ++g.row_ptr_[uv.first + 1];
    ++g.in_degree_[uv.second];
  }
  for (std::size_t i = 1; i < g.row_ptr_.size(); ++i) g.row_ptr_[i] += g.row_ptr_[i - 1];
  g.edges_.resize(merged.size());
  // merged is sorted by (u, v); fill rows in order.
  {
    std::vector<std::uint32_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
    for (const auto& [uv, t] : merged) g.edges_[cursor[uv.first]++] = {uv.second, t};
  }
  return g;
}

}  // namespace hetrec
