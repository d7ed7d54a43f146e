#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prefixopt/errors.hpp"

namespace prefixopt {

// Immutable grid of string cells with named fields. Row ids are the ingestion
// order (0..n-1) and never change; all downstream schedules reference rows by
// these ids. Cells are opaque bytes — no type coercion, no trimming.
class Table {
 public:
  Table(std::vector<std::string> field_names, std::vector<std::vector<std::string>> rows)
      : field_names_(std::move(field_names)), rows_(std::move(rows)) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < field_names_.size(); ++i) {
      if (field_names_[i].empty())
        throw schema_error("field " + std::to_string(i) + " has an empty name");
      if (!seen.insert(field_names_[i]).second)
        throw schema_error("duplicate field name: " + field_names_[i]);
      index_[field_names_[i]] = static_cast<int>(i);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() != field_names_.size())
        throw structural_error("row " + std::to_string(r) + " has " +
                               std::to_string(rows_[r].size()) + " cells, expected " +
                               std::to_string(field_names_.size()));
    }
  }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t field_count() const { return field_names_.size(); }

  const std::vector<std::string>& field_names() const { return field_names_; }
  const std::string& field_name(std::size_t f) const { return field_names_.at(f); }

  // -1 when absent.
  int field_index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
  }

  int require_field(std::string_view name) const {
    int f = field_index(name);
    if (f < 0) throw schema_error("unknown field: " + std::string(name));
    return f;
  }

  const std::string& cell(std::size_t row, std::size_t field) const {
    return rows_.at(row).at(field);
  }

  const std::vector<std::string>& row(std::size_t r) const { return rows_.at(r); }

  // FNV-1a over field names and cells, length-prefixed so concatenation is
  // unambiguous. Used to pin schedules and reports to their source table.
  std::uint64_t content_hash() const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::string_view s) {
      std::uint64_t len = s.size();
      for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(len >> (i * 8));
        h *= 1099511628211ull;
      }
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
      }
    };
    for (const auto& f : field_names_) mix(f);
    for (const auto& row : rows_)
      for (const auto& cell : row) mix(cell);
    return h;
  }

  std::string content_hash_hex() const {
    static const char hex[] = "0123456789abcdef";
    std::uint64_t h = content_hash();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
      out[i] = hex[h & 0xf];
      h >>= 4;
    }
    return out;
  }

 private:
  std::vector<std::string> field_names_;
  std::vector<std::vector<std::string>> rows_;
  std::unordered_map<std::string, int> index_;
};

enum class TableFormat { csv, jsonl };

namespace detail {

// RFC 4180: quoted fields may contain commas, quotes ("" escape) and newlines.
// Returns one record; `line` tracks the physical line the record starts on.
// `blank_line` marks a record that was a completely empty, unquoted line —
// a trailing one is ignored by the loader (a quoted empty cell `""` is not).
inline bool read_csv_record(std::istream& in, std::vector<std::string>& out,
                            std::size_t& line, bool& blank_line) {
  out.clear();
  blank_line = false;
  int c = in.get();
  if (c == EOF) return false;

  std::string cell;
  bool quoted = false;
  bool any_quote = false;
  bool any_content = false;
  std::size_t start_line = line;

  auto end_cell = [&] {
    out.push_back(std::move(cell));
    cell.clear();
  };
  auto end_record = [&] {
    end_cell();
    blank_line = !any_quote && out.size() == 1 && out[0].empty();
    return true;
  };

  while (true) {
    if (c == EOF) {
      if (quoted)
        throw structural_error("csv: unterminated quoted field starting near line " +
                               std::to_string(start_line));
      return end_record();
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int next = in.peek();
        if (next == '"') {
          cell += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        cell += ch;
      }
    } else if (ch == '"' && cell.empty() && !any_content) {
      quoted = true;
      any_quote = true;
      any_content = true;
    } else if (ch == ',') {
      end_cell();
      any_content = false;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      ++line;
      return end_record();
    } else if (ch == '\n') {
      ++line;
      return end_record();
    } else {
      cell += ch;
      any_content = true;
    }
    c = in.get();
  }
}

inline void write_csv_cell(std::ostream& out, std::string_view cell) {
  bool needs_quote = cell.empty() ||
                     cell.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quote) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace detail

inline Table load_csv(std::istream& in) {
  std::size_t line = 1;
  bool blank = false;
  std::vector<std::string> header;
  if (!detail::read_csv_record(in, header, line, blank))
    throw structural_error("csv: missing header row");
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& name : header)
      if (!seen.insert(name).second)
        throw schema_error("csv: duplicate header field: " + name);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> record;
  while (true) {
    std::size_t record_line = line;
    if (!detail::read_csv_record(in, record, line, blank)) break;
    if (blank && in.peek() == EOF) break;  // trailing blank line
    if (record.size() != header.size())
      throw structural_error("csv: line " + std::to_string(record_line) + " has " +
                             std::to_string(record.size()) + " cells, expected " +
                             std::to_string(header.size()));
    rows.push_back(std::move(record));
    record = {};
  }
  return Table(std::move(header), std::move(rows));
}

// JSONL ingestion: one object per line. The schema is the union of keys in
// first-seen order; keys absent from a line become empty strings. String
// values are kept verbatim; other scalars keep their JSON text, null -> "".
inline Table load_jsonl(std::istream& in) {
  std::vector<std::string> fields;
  std::unordered_map<std::string, std::size_t> field_pos;
  std::vector<std::vector<std::pair<std::size_t, std::string>>> sparse_rows;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw structural_error("jsonl: line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object())
      throw structural_error("jsonl: line " + std::to_string(line_no) + " is not an object");
    std::vector<std::pair<std::size_t, std::string>> cells;
    for (auto& [key, value] : obj.items()) {
      auto [it, inserted] = field_pos.try_emplace(key, fields.size());
      if (inserted) fields.push_back(key);
      std::string text;
      if (value.is_string())
        text = value.get<std::string>();
      else if (!value.is_null())
        text = value.dump();
      cells.emplace_back(it->second, std::move(text));
    }
    sparse_rows.push_back(std::move(cells));
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(sparse_rows.size());
  for (auto& sparse : sparse_rows) {
    std::vector<std::string> row(fields.size());
    for (auto& [pos, text] : sparse) row[pos] = std::move(text);
    rows.push_back(std::move(row));
  }
  return Table(std::move(fields), std::move(rows));
}

inline Table load_table(std::istream& in, TableFormat format) {
  return format == TableFormat::csv ? load_csv(in) : load_jsonl(in);
}

inline Table load_table_file(const std::string& path, TableFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open table file: " + path);
  return load_table(in, format);
}

inline void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t f = 0; f < t.field_count(); ++f) {
    if (f) out << ',';
    detail::write_csv_cell(out, t.field_name(f));
  }
  out << '\n';
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    for (std::size_t f = 0; f < t.field_count(); ++f) {
      if (f) out << ',';
      detail::write_csv_cell(out, t.cell(r, f));
    }
    out << '\n';
  }
}

}  // namespace prefixopt
