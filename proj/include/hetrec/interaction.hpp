#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "hetrec/csv.hpp"
#include "hetrec/errors.hpp"
#include "hetrec/time.hpp"

namespace hetrec {

/// One logged event. For object-object relations (e.g. a comment created under
/// a post) the user_id slot holds the source object's id; the schema supplies
/// the source tag per interaction.
struct InteractionRecord {
  std::string user_id;
  std::string object_id;
  std::string object_tag;
  std::string interaction;
  Timestamp timestamp = 0;
  bool symmetric = true;  // whether the reverse edge is created; bound from the schema

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

inline constexpr std::string_view kInteractionCsvHeader =
    "user_id,object_id,object_tag,interaction,timestamp";

/// Loads the canonical interaction log. Header must match exactly; errors name
/// the offending physical line.
inline std::vector<InteractionRecord> load_interactions_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path.string());
  if (lines.empty()) throw DataError(path.string() + ": empty interaction log");
  if (lines[0] != kInteractionCsvHeader)
    throw DataError(path.string() + ":1: expected header '" + std::string(kInteractionCsvHeader) +
                    "', got '" + lines[0] + "'");
  std::vector<InteractionRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;  // ignore trailing blank lines
    const std::string where = path.string() + ":" + std::to_string(i + 1) + ": ";
    std::vector<std::string> f;
    try {
      f = csv::split_line(lines[i]);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (f.size() != 5) throw DataError(where + "expected 5 fields, got " + std::to_string(f.size()));
    InteractionRecord r;
    r.user_id = f[0];
    r.object_id = f[1];
    r.object_tag = f[2];
    r.interaction = f[3];
    if (r.user_id.empty() || r.object_id.empty() || r.object_tag.empty() || r.interaction.empty())
      throw DataError(where + "empty field");
    try {
      r.timestamp = parse_iso8601_utc(f[4]);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline void save_interactions_csv(const std::filesystem::path& path,
                                  std::span<const InteractionRecord> records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << kInteractionCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv::escape_field(r.user_id) << ',' << csv::escape_field(r.object_id) << ','
        << csv::escape_field(r.object_tag) << ',' << csv::escape_field(r.interaction) << ','
        << format_iso8601_utc(r.timestamp) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace hetrec
