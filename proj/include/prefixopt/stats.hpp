#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "prefixopt/scoring.hpp"
#include "prefixopt/table.hpp"
#include "prefixopt/tokenizer.hpp"

namespace prefixopt {

struct FieldStats {
  std::string name;
  std::size_t cardinality = 0;  // distinct raw cell values, 1..n (0 on empty table)
  double avg_len = 0.0;         // mean segment token length under the active scoring
};

struct ColumnStats {
  std::vector<FieldStats> fields;
  std::size_t total_rows = 0;
};

inline ColumnStats compute_stats(const Table& t, const Tokenizer& tok,
                                 SegmentScoring scoring = SegmentScoring::value_only) {
  ColumnStats stats;
  stats.total_rows = t.row_count();
  stats.fields.reserve(t.field_count());
  for (std::size_t f = 0; f < t.field_count(); ++f) {
    FieldStats fs;
    fs.name = t.field_name(f);
    std::unordered_set<std::string_view> distinct;
    std::uint64_t total_len = 0;
    for (std::size_t r = 0; r < t.row_count(); ++r) {
      const std::string& v = t.cell(r, f);
      distinct.insert(v);
      total_len += segment_len(fs.name, v, tok, scoring);
    }
    fs.cardinality = distinct.size();
    fs.avg_len = t.row_count() ? static_cast<double>(total_len) / t.row_count() : 0.0;
    stats.fields.push_back(std::move(fs));
  }
  return stats;
}

}  // namespace prefixopt
