#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prefixopt/errors.hpp"
#include "prefixopt/fd.hpp"
#include "prefixopt/objective.hpp"
#include "prefixopt/solve_result.hpp"
#include "prefixopt/stats.hpp"

namespace prefixopt {

// Column score used when the recursion stops and a sub-table falls back to a
// fixed field ordering. Three variants are selectable; the cardinality-
// weighted squared form is the default.
enum class StatsScoreVariant {
  cardinality_weighted_squared,  // avg_len^2 * (n / cardinality - 1)
  squared_length,                // avg_len^2
  length_frequency,              // avg_len * n / cardinality
};

inline StatsScoreVariant stats_variant_by_name(std::string_view name) {
  if (name == "weighted") return StatsScoreVariant::cardinality_weighted_squared;
  if (name == "squared") return StatsScoreVariant::squared_length;
  if (name == "length-freq") return StatsScoreVariant::length_frequency;
  throw schema_error("unknown stats variant: " + std::string(name) +
                     " (expected 'weighted', 'squared' or 'length-freq')");
}

inline std::string_view stats_variant_name(StatsScoreVariant v) {
  switch (v) {
    case StatsScoreVariant::cardinality_weighted_squared: return "weighted";
    case StatsScoreVariant::squared_length: return "squared";
    case StatsScoreVariant::length_frequency: return "length-freq";
  }
  return "weighted";
}

struct GgrConfig {
  std::size_t row_recursion_depth = 4;
  std::size_t column_recursion_depth = 2;
  std::uint64_t hitcount_stop_threshold = 100000;
  bool use_fds = true;
  StatsScoreVariant stats_variant = StatsScoreVariant::cardinality_weighted_squared;
};

// Fields sorted by descending expected hit contribution, ties by schema
// position. All-distinct fields score 0 under the default variant and sink to
// the back.
inline std::vector<int> fixed_order_by_hitcount_stats(
    const ColumnStats& stats,
    StatsScoreVariant variant = StatsScoreVariant::cardinality_weighted_squared) {
  std::vector<int> order(stats.fields.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(stats.fields.size(), 0.0);
  for (std::size_t f = 0; f < stats.fields.size(); ++f) {
    const FieldStats& fs = stats.fields[f];
    if (fs.cardinality == 0) continue;
    double ratio = static_cast<double>(stats.total_rows) / fs.cardinality;
    switch (variant) {
      case StatsScoreVariant::cardinality_weighted_squared:
        score[f] = fs.avg_len * fs.avg_len * (ratio - 1.0);
        break;
      case StatsScoreVariant::squared_length:
        score[f] = fs.avg_len * fs.avg_len;
        break;
      case StatsScoreVariant::length_frequency:
        score[f] = fs.avg_len * ratio;
        break;
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&score](int a, int b) { return score[a] > score[b]; });
  return order;
}

struct HitCountResult {
  double score = 0.0;
  std::vector<std::string> fields;  // the scored field first, FD partners after
};

// Group score for one (field, value) pair: rows R_v carrying the value, the
// value's squared length plus the mean length of each FD-inferred field over
// R_v, all times |R_v| - 1. The linear FD term ranks candidates only; realized
// scores are always recomputed from the emitted schedule.
inline HitCountResult hitcount(const Table& t, std::string_view field, std::string_view value,
                               const FunctionalDependencySet& fds, const Tokenizer& tok,
                               SegmentScoring scoring = SegmentScoring::value_only) {
  int c = t.require_field(field);

  std::vector<int> inferred;
  for (const auto& group : fds.groups) {
    bool has_field = false;
    for (const auto& name : group)
      if (name == field) has_field = true;
    if (!has_field) continue;
    for (const auto& name : group) {
      int other = t.require_field(name);
      if (other != c) inferred.push_back(other);
    }
    break;
  }
  std::sort(inferred.begin(), inferred.end());

  std::uint64_t count = 0;
  std::uint64_t inferred_total = 0;
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    if (t.cell(r, c) != value) continue;
    ++count;
    for (int other : inferred)
      inferred_total += segment_len(t.field_name(other), t.cell(r, other), tok, scoring);
  }
  if (count == 0)
    throw domain_error("hitcount: value does not occur in field " + std::string(field));

  double len = static_cast<double>(segment_len(field, value, tok, scoring));
  double tot_len = len * len + static_cast<double>(inferred_total) / count;

  HitCountResult res;
  res.score = tot_len * static_cast<double>(count - 1);
  res.fields.push_back(std::string(field));
  for (int other : inferred) res.fields.push_back(t.field_name(other));
  return res;
}

namespace detail {

// Greedy group recursion. Each step scans every (field, distinct value) pair
// in the residual sub-table, extracts the argmax group as one contiguous block
// (the group value and its FD partners first in each of its rows), and recurses
// on the two remainders. Recursion stops at the configured depths, when the
// best group score falls below the threshold, or when no group can score at
// all; stopped sub-tables get a statistics-ordered fixed field order and a
// lexicographic row sort.
class GgrSolver {
 public:
  GgrSolver(const Table& t, const FunctionalDependencySet& fds, const GgrConfig& cfg,
            const Tokenizer& tok, SegmentScoring scoring)
      : t_(t), cfg_(cfg), tok_(tok), scoring_(scoring) {
    len_.resize(t.row_count(), std::vector<std::uint64_t>(t.field_count(), 0));
    for (std::size_t r = 0; r < t.row_count(); ++r)
      for (std::size_t f = 0; f < t.field_count(); ++f)
        len_[r][f] = segment_len(t.field_name(f), t.cell(r, f), tok, scoring);

    partners_.resize(t.field_count());
    if (cfg.use_fds) {
      for (const auto& group : fds.groups) {
        std::vector<int> members;
        for (const auto& name : group) members.push_back(t.require_field(name));
        std::sort(members.begin(), members.end());
        for (int f : members)
          for (int other : members)
            if (other != f) partners_[f].push_back(other);
      }
    }
  }

  struct Entry {
    std::uint32_t row;
    std::vector<int> fields;
  };

  SolveStats stats;

  std::vector<Entry> solve() {
    std::vector<std::uint32_t> rows(t_.row_count());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<int> cols(t_.field_count());
    std::iota(cols.begin(), cols.end(), 0);
    return recurse(std::move(rows), std::move(cols), 0, 0, 0);
  }

 private:
  struct Candidate {
    unsigned __int128 numer = 0;  // hitcount = numer / count, kept exact
    std::uint64_t count = 0;
    int col = -1;
    std::string_view value;

    bool better_than(const Candidate& o) const {
      // Score desc, then larger group, then smaller field index, then value.
      unsigned __int128 lhs = numer * o.count;
      unsigned __int128 rhs = o.numer * count;
      if (lhs != rhs) return lhs > rhs;
      if (count != o.count) return count > o.count;
      if (col != o.col) return col < o.col;
      return value < o.value;
    }
  };

  const Table& t_;
  const GgrConfig& cfg_;
  const Tokenizer& tok_;
  SegmentScoring scoring_;
  std::vector<std::vector<std::uint64_t>> len_;
  std::vector<std::vector<int>> partners_;

  std::vector<Entry> recurse(std::vector<std::uint32_t> rows, std::vector<int> cols,
                             std::size_t row_depth, std::size_t col_depth,
                             std::size_t depth) {
    ++stats.recursive_calls;
    stats.max_depth = std::max<std::uint64_t>(stats.max_depth, depth);

    if (rows.empty()) return {};
    if (cols.empty()) {
      std::sort(rows.begin(), rows.end());
      std::vector<Entry> out;
      for (std::uint32_t r : rows) out.push_back({r, {}});
      return out;
    }
    if (rows.size() == 1) return {{rows[0], cols}};
    if (cols.size() == 1) {
      int c = cols[0];
      std::sort(rows.begin(), rows.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::string& va = t_.cell(a, c);
        const std::string& vb = t_.cell(b, c);
        if (va != vb) return va < vb;
        return a < b;
      });
      std::vector<Entry> out;
      for (std::uint32_t r : rows) out.push_back({r, {c}});
      return out;
    }
    if (row_depth > cfg_.row_recursion_depth || col_depth > cfg_.column_recursion_depth)
      return fallback(std::move(rows), std::move(cols));

    std::vector<bool> in_cols(t_.field_count(), false);
    for (int c : cols) in_cols[c] = true;

    Candidate best;
    bool have_best = false;
    for (int c : cols) {
      std::vector<int> active_partners;
      for (int other : partners_[c])
        if (in_cols[other]) active_partners.push_back(other);

      struct Group {
        std::uint64_t count = 0;
        std::uint64_t value_len = 0;
        std::uint64_t partner_total = 0;
      };
      std::unordered_map<std::string_view, Group> groups;
      groups.reserve(rows.size());
      for (std::uint32_t r : rows) {
        Group& g = groups[t_.cell(r, c)];
        if (g.count == 0) g.value_len = len_[r][c];
        ++g.count;
        for (int other : active_partners) g.partner_total += len_[r][other];
      }
      for (const auto& [value, g] : groups) {
        ++stats.candidates_examined;
        // hitcount = (len^2 + partner_total / count) * (count - 1)
        //          = (len^2 * count + partner_total) * (count - 1) / count
        unsigned __int128 numer =
            (static_cast<unsigned __int128>(g.value_len) * g.value_len * g.count +
             g.partner_total) *
            (g.count - 1);
        Candidate cand{numer, g.count, c, value};
        if (!have_best || cand.better_than(best)) {
          best = cand;
          have_best = true;
        }
      }
    }

    // Early stop: nothing worth grouping, or below the configured threshold.
    if (!have_best || best.numer == 0 ||
        best.numer < static_cast<unsigned __int128>(cfg_.hitcount_stop_threshold) * best.count)
      return fallback(std::move(rows), std::move(cols));

    std::vector<int> block_cols{best.col};
    for (int other : partners_[best.col])
      if (in_cols[other]) block_cols.push_back(other);

    std::vector<std::uint32_t> group_rows, rest_rows;
    for (std::uint32_t r : rows) {
      if (t_.cell(r, best.col) == best.value)
        group_rows.push_back(r);
      else
        rest_rows.push_back(r);
    }

    std::vector<int> sub_cols;
    sub_cols.reserve(cols.size());
    for (int c : cols)
      if (std::find(block_cols.begin(), block_cols.end(), c) == block_cols.end())
        sub_cols.push_back(c);

    auto block = recurse(std::move(group_rows), std::move(sub_cols), row_depth,
                         col_depth + 1, depth + 1);
    auto rest = recurse(std::move(rest_rows), std::move(cols), row_depth + 1, col_depth,
                        depth + 1);

    std::vector<Entry> out;
    out.reserve(block.size() + rest.size());
    for (auto& e : block) {
      std::vector<int> fields;
      fields.reserve(block_cols.size() + e.fields.size());
      fields.insert(fields.end(), block_cols.begin(), block_cols.end());
      fields.insert(fields.end(), e.fields.begin(), e.fields.end());
      out.push_back({e.row, std::move(fields)});
    }
    for (auto& e : rest) out.push_back(std::move(e));
    return out;
  }

  // Residual sub-table ordering from its own column statistics, then a
  // lexicographic row sort under that fixed order.
  std::vector<Entry> fallback(std::vector<std::uint32_t> rows, std::vector<int> cols) {
    ColumnStats stats_local;
    stats_local.total_rows = rows.size();
    for (int c : cols) {
      FieldStats fs;
      fs.name = t_.field_name(c);
      std::unordered_set<std::string_view> distinct;
      std::uint64_t total_len = 0;
      for (std::uint32_t r : rows) {
        distinct.insert(t_.cell(r, c));
        total_len += len_[r][c];
      }
      fs.cardinality = distinct.size();
      fs.avg_len = rows.empty() ? 0.0 : static_cast<double>(total_len) / rows.size();
      stats_local.fields.push_back(std::move(fs));
    }

    std::vector<int> local_order = fixed_order_by_hitcount_stats(stats_local, cfg_.stats_variant);
    std::vector<int> field_order;
    field_order.reserve(cols.size());
    for (int i : local_order) field_order.push_back(cols[i]);

    std::vector<std::string> keys;
    keys.reserve(rows.size());
    for (std::uint32_t r : rows) {
      std::string key;
      for (int c : field_order) key += fragment_text(t_.field_name(c), t_.cell(r, c));
      keys.push_back(std::move(key));
    }
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&keys](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

    std::vector<Entry> out;
    out.reserve(rows.size());
    for (std::size_t i : idx) out.push_back({rows[i], field_order});
    return out;
  }
};

}  // namespace detail

// Greedy solver; handles any table size. The reported score is the objective
// recomputed over the emitted schedule, so accounting always matches what the
// schedule earns. The recursed schedule competes against the plain
// statistics-ordered schedule for the whole table and the better one is
// emitted: greedy extraction can occasionally fragment groupings a fixed
// order would keep, and the solver must never lose to its own fallback.
inline SolveResult ggr(const Table& t, const FunctionalDependencySet& fds,
                       const GgrConfig& cfg, const Tokenizer& tok,
                       SegmentScoring scoring = SegmentScoring::value_only) {
  auto start = std::chrono::steady_clock::now();
  detail::GgrSolver solver(t, fds, cfg, tok, scoring);
  auto entries = solver.solve();

  SolveResult result;
  result.schedule.entries.reserve(entries.size());
  for (auto& e : entries) result.schedule.entries.push_back({e.row, std::move(e.fields)});
  result.phc_score = phc(result.schedule, t, tok, scoring);

  if (t.row_count() > 0 && t.field_count() > 0) {
    RequestSchedule fallback = sort_rows_fixed_order(
        t, fixed_order_by_hitcount_stats(compute_stats(t, tok, scoring), cfg.stats_variant));
    std::uint64_t fallback_score = phc(fallback, t, tok, scoring);
    if (fallback_score > result.phc_score) {
      result.schedule = std::move(fallback);
      result.phc_score = fallback_score;
    }
  }

  result.stats = solver.stats;
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace prefixopt
