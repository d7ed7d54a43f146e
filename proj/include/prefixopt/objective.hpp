#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "prefixopt/scoring.hpp"
#include "prefixopt/stats.hpp"
#include "prefixopt/table.hpp"
#include "prefixopt/tokenizer.hpp"

namespace prefixopt {

// One rendered request: a row plus the field permutation to render it with.
// field_order holds indices into the table schema; it may cover a subset of
// the fields, but solvers always emit full permutations.
struct ScheduleEntry {
  std::size_t row_id = 0;
  std::vector<int> field_order;
};

// The solver output: requests in execution order, each with its own field
// permutation. Scores depend only on the rendered content sequence.
struct RequestSchedule {
  std::vector<ScheduleEntry> entries;

  std::size_t size() const { return entries.size(); }
};

inline void validate_schedule(const RequestSchedule& s, const Table& t) {
  std::unordered_set<std::size_t> rows_seen;
  for (const auto& e : s.entries) {
    if (e.row_id >= t.row_count())
      throw schema_error("schedule references row " + std::to_string(e.row_id) +
                         " outside table of " + std::to_string(t.row_count()) + " rows");
    if (!rows_seen.insert(e.row_id).second)
      throw schema_error("schedule lists row " + std::to_string(e.row_id) + " twice");
    std::unordered_set<int> fields_seen;
    for (int f : e.field_order) {
      if (f < 0 || static_cast<std::size_t>(f) >= t.field_count())
        throw schema_error("schedule entry for row " + std::to_string(e.row_id) +
                           " names a field outside the schema");
      if (!fields_seen.insert(f).second)
        throw schema_error("schedule entry for row " + std::to_string(e.row_id) +
                           " repeats a field");
    }
  }
}

// Identity ordering: rows in ingestion order, schema field order.
inline RequestSchedule original_order_schedule(const Table& t) {
  RequestSchedule s;
  s.entries.reserve(t.row_count());
  std::vector<int> order(t.field_count());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t r = 0; r < t.row_count(); ++r) s.entries.push_back({r, order});
  return s;
}

// Prefix hit score of request r against request r-1: the sum of squared
// segment lengths over the maximal leading run of positions where both the
// field and the cell value match exactly. Whole-fragment matches only — a
// value that is a proper prefix of its predecessor scores nothing, and equal
// values under different field labels render different bytes, so they do not
// match either. Request 0 has no predecessor and scores 0.
inline std::uint64_t hit(const RequestSchedule& s, std::size_t r, const Table& t,
                         const Tokenizer& tok,
                         SegmentScoring scoring = SegmentScoring::value_only) {
  if (r >= s.size())
    throw domain_error("hit: request index " + std::to_string(r) +
                       " out of range for schedule of " + std::to_string(s.size()));
  if (r == 0) return 0;
  const ScheduleEntry& cur = s.entries[r];
  const ScheduleEntry& prev = s.entries[r - 1];
  std::size_t limit = std::min(cur.field_order.size(), prev.field_order.size());
  std::uint64_t score = 0;
  for (std::size_t p = 0; p < limit; ++p) {
    int f = cur.field_order[p];
    if (f != prev.field_order[p]) break;
    const std::string& a = t.cell(cur.row_id, f);
    const std::string& b = t.cell(prev.row_id, f);
    if (a != b) break;
    std::uint64_t len = segment_len(t.field_name(f), a, tok, scoring);
    score += len * len;
  }
  return score;
}

// Total prefix hit count of a schedule: sum of hit() over requests 1..n-1.
inline std::uint64_t phc(const RequestSchedule& s, const Table& t, const Tokenizer& tok,
                         SegmentScoring scoring = SegmentScoring::value_only) {
  std::uint64_t total = 0;
  for (std::size_t r = 1; r < s.size(); ++r) total += hit(s, r, t, tok, scoring);
  return total;
}

// JSON body of one request: keys in the entry's field order.
inline std::string render_body(const ScheduleEntry& e, const Table& t) {
  std::string out = "{";
  for (std::size_t p = 0; p < e.field_order.size(); ++p) {
    int f = e.field_order[p];
    if (p) out += ", ";
    out += '"';
    out += json_escape(t.field_name(f));
    out += "\": \"";
    out += json_escape(t.cell(e.row_id, f));
    out += '"';
  }
  out += '}';
  return out;
}

// Full prompt: system prompt, question, then the JSON body. Non-empty parts
// are joined with single newlines; byte-deterministic.
inline std::string render_prompt(const ScheduleEntry& e, const Table& t,
                                 std::string_view system_prompt, std::string_view question) {
  std::string out;
  if (!system_prompt.empty()) {
    out += system_prompt;
    out += '\n';
  }
  if (!question.empty()) {
    out += question;
    out += '\n';
  }
  out += render_body(e, t);
  return out;
}

inline std::vector<int> identity_field_order(const Table& t) {
  std::vector<int> order(t.field_count());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

inline void validate_field_permutation(const Table& t, const std::vector<int>& order) {
  if (order.size() != t.field_count())
    throw schema_error("field order must name every field exactly once");
  std::vector<bool> seen(t.field_count(), false);
  for (int f : order) {
    if (f < 0 || static_cast<std::size_t>(f) >= t.field_count() || seen[f])
      throw schema_error("field order is not a permutation of the schema");
    seen[f] = true;
  }
}

// Fixed-order baseline: every row uses the same field permutation and rows are
// sorted lexicographically (raw bytes) by their rendered concatenation under
// that order. Ties keep ingestion order.
inline RequestSchedule sort_rows_fixed_order(const Table& t, const std::vector<int>& field_order) {
  validate_field_permutation(t, field_order);
  std::vector<std::string> keys;
  keys.reserve(t.row_count());
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    std::string key;
    for (int f : field_order) key += fragment_text(t.field_name(f), t.cell(r, f));
    keys.push_back(std::move(key));
  }
  std::vector<std::size_t> rows(t.row_count());
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(),
                   [&keys](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  RequestSchedule s;
  s.entries.reserve(t.row_count());
  for (std::size_t r : rows) s.entries.push_back({r, field_order});
  return s;
}

// Fixed field order from column statistics: score = ASL * (rows / cardinality),
// descending, ties by schema position. Long and frequently repeated columns
// come first.
inline std::vector<int> fixed_order_by_stats(const ColumnStats& stats) {
  std::vector<int> order(stats.fields.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(stats.fields.size(), 0.0);
  for (std::size_t f = 0; f < stats.fields.size(); ++f) {
    const FieldStats& fs = stats.fields[f];
    if (fs.cardinality > 0)
      score[f] = fs.avg_len * (static_cast<double>(stats.total_rows) / fs.cardinality);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&score](int a, int b) { return score[a] > score[b]; });
  return order;
}

}  // namespace prefixopt
