#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "domsift/error.hpp"

namespace domsift::csv {

using Record = std::vector<std::string>;

/// Reads one RFC 4180 record. Lines beginning with '#' at record start
/// are metadata comments; they are handed to `comment` (if given) and
/// skipped. Returns nullopt at end of input.
inline std::optional<Record> read_record(std::istream& in, std::vector<std::string>* comments = nullptr) {
  std::string line;
  while (true) {
    if (!std::getline(in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      if (comments) comments->push_back(line.substr(1));
      continue;
    }
    break;
  }

  Record rec;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field spanning a newline.
      std::string next;
      if (!std::getline(in, next)) throw Error(ErrorCode::SchemaMismatch, "unterminated quoted CSV field");
      if (!next.empty() && next.back() == '\r') next.pop_back();
      field += '\n';
      line = std::move(next);
      i = 0;
      continue;
    }
    char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  rec.push_back(std::move(field));
  return rec;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_record(std::ostream& out, const Record& rec) {
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (i) out << ',';
    out << escape(rec[i]);
  }
  out << '\n';
}

/// Column lookup over a header row.
class Header {
 public:
  Header() = default;
  explicit Header(Record names) : names_(std::move(names)) {}

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t require(std::string_view name, std::string_view context) const {
    auto idx = find(name);
    if (!idx)
      throw Error(ErrorCode::SchemaMismatch,
                  std::string(context) + ": missing column '" + std::string(name) + "'");
    return *idx;
  }

  const Record& names() const { return names_; }

 private:
  Record names_;
};

}  // namespace domsift::csv
