#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hetrec/errors.hpp"

namespace hetrec::csv {

/// Splits one physical CSV line into fields. Supports RFC-4180 double-quote
/// escaping; embedded newlines are not supported (the interaction log format
/// never needs them).
inline std::vector<std::string> split_line(std::string_view line, char delim = ',') {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quote in CSV line");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string escape_field(std::string_view f, char delim = ',') {
  bool needs_quote = f.find(delim) != std::string_view::npos ||
                     f.find('"') != std::string_view::npos ||
                     f.find('\n') != std::string_view::npos;
  if (!needs_quote) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Reads all lines of a text file, stripping a trailing '\r' (CRLF input).
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace hetrec::csv
