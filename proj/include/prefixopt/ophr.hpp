#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prefixopt/errors.hpp"
#include "prefixopt/objective.hpp"
#include "prefixopt/solve_result.hpp"

namespace prefixopt {

struct OphrLimits {
  std::size_t max_rows = 12;
  std::size_t max_fields = 5;
  std::chrono::milliseconds time_budget{0};  // 0 = unlimited
  bool force = false;                        // override the row/field caps
};

// Raised when the time budget expires. Carries the best complete schedule
// found so far (or a statistics-ordered fallback if none completed), flagged
// non-optimal.
class time_budget_error : public error {
 public:
  time_budget_error(std::string msg, SolveResult partial_result)
      : error(std::move(msg)), partial(std::move(partial_result)) {}

  SolveResult partial;
};

namespace detail {

struct ophr_deadline_hit {};

// Exact recursive maximisation of the prefix hit objective. Every way of
// splitting the current sub-table into (rows sharing value v in field c) and
// the remaining rows is tried; the value group is emitted as one contiguous
// block with v's fragment first in each of its rows, followed by the group's
// recursive ordering, then the remaining rows. Sub-tables are memoised by
// content (field set + sorted row multiset) so that permuted descents share
// work; memoisation never changes results.
class OphrSolver {
 public:
  OphrSolver(const Table& t, const Tokenizer& tok, SegmentScoring scoring,
             std::chrono::steady_clock::time_point deadline, bool has_deadline)
      : t_(t), deadline_(deadline), has_deadline_(has_deadline) {
    len_.resize(t.row_count(), std::vector<std::uint64_t>(t.field_count(), 0));
    for (std::size_t r = 0; r < t.row_count(); ++r)
      for (std::size_t f = 0; f < t.field_count(); ++f)
        len_[r][f] = segment_len(t.field_name(f), t.cell(r, f), tok, scoring);
  }

  struct Entry {
    std::uint32_t row;
    std::vector<int> fields;
  };

  struct Result {
    std::uint64_t score = 0;
    std::vector<Entry> entries;
  };

  SolveStats stats;

  // Best complete top-level candidate seen so far; the carried result when a
  // time budget expires mid-search.
  Result incumbent;
  bool has_incumbent = false;

  Result solve(std::vector<std::uint32_t> rows, std::vector<int> cols) {
    return recurse(std::move(rows), std::move(cols), 0);
  }

 private:
  struct MemoEntry {
    std::uint64_t score;
    // Rows referenced by their position in the canonical (content, id) order.
    std::vector<std::pair<std::uint32_t, std::vector<int>>> entries;
  };

  const Table& t_;
  std::vector<std::vector<std::uint64_t>> len_;
  std::unordered_map<std::string, MemoEntry> memo_;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_;

  void check_deadline() const {
    if (has_deadline_ && std::chrono::steady_clock::now() >= deadline_)
      throw ophr_deadline_hit{};
  }

  std::uint64_t sq(std::uint64_t x) const { return x * x; }

  bool row_content_less(std::uint32_t a, std::uint32_t b, const std::vector<int>& cols) const {
    for (int c : cols) {
      const std::string& va = t_.cell(a, c);
      const std::string& vb = t_.cell(b, c);
      if (va != vb) return va < vb;
    }
    return a < b;
  }

  std::vector<std::uint32_t> canonical_rows(std::vector<std::uint32_t> rows,
                                            const std::vector<int>& cols) const {
    std::sort(rows.begin(), rows.end(),
              [&](std::uint32_t a, std::uint32_t b) { return row_content_less(a, b, cols); });
    return rows;
  }

  std::string memo_key(const std::vector<std::uint32_t>& sorted_rows,
                       const std::vector<int>& cols) const {
    std::string key;
    for (int c : cols) {
      key += std::to_string(c);
      key += ',';
    }
    key += '|';
    for (std::uint32_t r : sorted_rows) {
      for (int c : cols) {
        const std::string& v = t_.cell(r, c);
        key += std::to_string(v.size());
        key += ':';
        key += v;
      }
      key += ';';
    }
    return key;
  }

  Result from_memo(const MemoEntry& m, const std::vector<std::uint32_t>& sorted_rows) const {
    Result res;
    res.score = m.score;
    res.entries.reserve(m.entries.size());
    for (const auto& [pos, fields] : m.entries)
      res.entries.push_back({sorted_rows[pos], fields});
    return res;
  }

  Result recurse(std::vector<std::uint32_t> rows, std::vector<int> cols, std::size_t depth) {
    check_deadline();
    ++stats.recursive_calls;
    stats.max_depth = std::max<std::uint64_t>(stats.max_depth, depth);

    if (rows.empty()) return {};
    if (cols.empty()) {
      Result res;
      std::sort(rows.begin(), rows.end());
      for (std::uint32_t r : rows) res.entries.push_back({r, {}});
      return res;
    }
    if (rows.size() == 1) {
      Result res;
      res.entries.push_back({rows[0], cols});
      return res;
    }
    if (cols.size() == 1) return single_field(std::move(rows), cols[0]);

    auto sorted_rows = canonical_rows(rows, cols);
    std::string key = memo_key(sorted_rows, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return from_memo(it->second, sorted_rows);

    // Candidate splits: every (field, distinct value) group, values scanned in
    // byte order so equal scores resolve to the smallest field then value.
    Result best;
    bool have_best = false;
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      int c = cols[ci];
      std::map<std::string_view, std::vector<std::uint32_t>> groups;
      for (std::uint32_t r : rows) groups[t_.cell(r, c)].push_back(r);
      for (auto& [value, group_rows] : groups) {
        ++stats.candidates_examined;
        std::uint64_t credit = sq(len_[group_rows[0]][c]) *
                               static_cast<std::uint64_t>(group_rows.size() - 1);

        std::vector<std::uint32_t> rest;
        rest.reserve(rows.size() - group_rows.size());
        for (std::uint32_t r : rows)
          if (t_.cell(r, c) != value) rest.push_back(r);

        std::vector<int> sub_cols;
        sub_cols.reserve(cols.size() - 1);
        for (int other : cols)
          if (other != c) sub_cols.push_back(other);

        Result b = recurse(group_rows, sub_cols, depth + 1);
        Result a = recurse(std::move(rest), cols, depth + 1);

        std::uint64_t score = credit + a.score + b.score;
        if (!have_best || score > best.score) {
          have_best = true;
          best.score = score;
          best.entries.clear();
          best.entries.reserve(rows.size());
          for (auto& e : b.entries) {
            std::vector<int> fields;
            fields.reserve(e.fields.size() + 1);
            fields.push_back(c);
            fields.insert(fields.end(), e.fields.begin(), e.fields.end());
            best.entries.push_back({e.row, std::move(fields)});
          }
          for (auto& e : a.entries) best.entries.push_back(std::move(e));
          if (depth == 0) {
            incumbent = best;
            has_incumbent = true;
          }
        }
      }
    }

    MemoEntry memo;
    memo.score = best.score;
    std::unordered_map<std::uint32_t, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < sorted_rows.size(); ++i) pos[sorted_rows[i]] = i;
    for (const auto& e : best.entries) memo.entries.emplace_back(pos[e.row], e.fields);
    memo_.emplace(std::move(key), std::move(memo));
    return best;
  }

  // Single field: group equal values adjacently (byte order, then row id).
  // Score is the closed form sum of len(v)^2 * (count(v) - 1).
  Result single_field(std::vector<std::uint32_t> rows, int c) {
    std::sort(rows.begin(), rows.end(), [&](std::uint32_t a, std::uint32_t b) {
      const std::string& va = t_.cell(a, c);
      const std::string& vb = t_.cell(b, c);
      if (va != vb) return va < vb;
      return a < b;
    });
    Result res;
    res.entries.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && t_.cell(rows[i], c) == t_.cell(rows[i - 1], c))
        res.score += sq(len_[rows[i]][c]);
      res.entries.push_back({rows[i], {c}});
    }
    return res;
  }
};

inline RequestSchedule entries_to_schedule(const std::vector<OphrSolver::Entry>& entries) {
  RequestSchedule s;
  s.entries.reserve(entries.size());
  for (const auto& e : entries) s.entries.push_back({e.row, e.fields});
  return s;
}

}  // namespace detail

// Statistics-ordered baseline schedule, used as the incumbent when a time
// budget expires before any exact candidate completes.
inline RequestSchedule stats_fallback_schedule(const Table& t, const Tokenizer& tok,
                                               SegmentScoring scoring) {
  if (t.row_count() == 0 || t.field_count() == 0) {
    RequestSchedule s;
    for (std::size_t r = 0; r < t.row_count(); ++r) s.entries.push_back({r, {}});
    return s;
  }
  return sort_rows_fixed_order(t, fixed_order_by_stats(compute_stats(t, tok, scoring)));
}

// Exact solver. Exponential: refuses tables beyond the configured caps unless
// forced. With a time budget, expiry raises time_budget_error carrying the
// best complete top-level candidate found so far.
inline SolveResult ophr(const Table& t, const Tokenizer& tok, OphrLimits limits = {},
                        SegmentScoring scoring = SegmentScoring::value_only) {
  if (!limits.force && (t.row_count() > limits.max_rows || t.field_count() > limits.max_fields))
    throw size_error("ophr: table is " + std::to_string(t.row_count()) + "x" +
                     std::to_string(t.field_count()) + ", caps are " +
                     std::to_string(limits.max_rows) + " rows x " +
                     std::to_string(limits.max_fields) +
                     " fields (exponential solver); pass force to override");

  auto start = std::chrono::steady_clock::now();
  bool has_deadline = limits.time_budget.count() > 0;
  auto deadline = start + limits.time_budget;

  detail::OphrSolver solver(t, tok, scoring, deadline, has_deadline);
  std::vector<std::uint32_t> rows(t.row_count());
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<int> cols(t.field_count());
  std::iota(cols.begin(), cols.end(), 0);

  SolveResult result;
  try {
    auto best = solver.solve(std::move(rows), std::move(cols));
    result.phc_score = best.score;
    result.schedule = detail::entries_to_schedule(best.entries);
    result.optimal = true;
  } catch (const detail::ophr_deadline_hit&) {
    SolveResult partial;
    if (solver.has_incumbent) {
      partial.schedule = detail::entries_to_schedule(solver.incumbent.entries);
      partial.phc_score = solver.incumbent.score;
    } else {
      partial.schedule = stats_fallback_schedule(t, tok, scoring);
      partial.phc_score = phc(partial.schedule, t, tok, scoring);
    }
    partial.optimal = false;
    partial.stats = solver.stats;
    partial.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    throw time_budget_error(
        "ophr: time budget of " + std::to_string(limits.time_budget.count()) +
            " ms exceeded; carrying the best non-optimal schedule found",
        std::move(partial));
  }
  result.stats = solver.stats;
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// Full enumeration of row permutations x per-row field permutations. The
// ground-truth oracle for tiny tables; growth is n! * (m!)^n, hence the hard
// caps.
inline SolveResult brute_force_max(const Table& t, const Tokenizer& tok,
                                   SegmentScoring scoring = SegmentScoring::value_only) {
  constexpr std::size_t kMaxRows = 5;
  constexpr std::size_t kMaxFields = 3;
  if (t.row_count() > kMaxRows || t.field_count() > kMaxFields)
    throw size_error("brute_force_max: table is " + std::to_string(t.row_count()) + "x" +
                     std::to_string(t.field_count()) + ", hard caps are " +
                     std::to_string(kMaxRows) + " rows x " + std::to_string(kMaxFields) +
                     " fields");

  auto start = std::chrono::steady_clock::now();
  const std::size_t n = t.row_count();
  const std::size_t m = t.field_count();

  SolveResult result;
  if (n == 0) return result;

  // Intern cell values per field so schedule evaluation is integer compares.
  std::vector<std::vector<std::uint32_t>> val_id(n, std::vector<std::uint32_t>(m));
  std::vector<std::vector<std::uint64_t>> len2(n, std::vector<std::uint64_t>(m));
  for (std::size_t f = 0; f < m; ++f) {
    std::unordered_map<std::string_view, std::uint32_t> ids;
    for (std::size_t r = 0; r < n; ++r) {
      auto [it, inserted] =
          ids.try_emplace(t.cell(r, f), static_cast<std::uint32_t>(ids.size()));
      val_id[r][f] = it->second;
      std::uint64_t len = segment_len(t.field_name(f), t.cell(r, f), tok, scoring);
      len2[r][f] = len * len;
    }
  }

  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  std::vector<std::size_t> row_order(n);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::vector<std::size_t> perm_choice(n, 0);

  std::uint64_t best_score = 0;
  std::vector<std::size_t> best_rows = row_order;
  std::vector<std::size_t> best_perms = perm_choice;
  bool have_best = false;

  do {
    std::fill(perm_choice.begin(), perm_choice.end(), 0);
    while (true) {
      ++result.stats.candidates_examined;
      std::uint64_t score = 0;
      for (std::size_t r = 1; r < n; ++r) {
        const auto& pc = perms[perm_choice[r]];
        const auto& pp = perms[perm_choice[r - 1]];
        std::size_t cur = row_order[r], prev = row_order[r - 1];
        for (std::size_t p = 0; p < m; ++p) {
          int f = pc[p];
          if (f != pp[p] || val_id[cur][f] != val_id[prev][f]) break;
          score += len2[cur][f];
        }
      }
      if (!have_best || score > best_score) {
        have_best = true;
        best_score = score;
        best_rows = row_order;
        best_perms = perm_choice;
      }
      // Odometer over per-row permutation choices, last row fastest.
      std::size_t slot = n;
      while (slot > 0) {
        --slot;
        if (++perm_choice[slot] < perms.size()) break;
        perm_choice[slot] = 0;
        if (slot == 0) goto next_row_order;
      }
      if (n == 0) break;
    }
  next_row_order:;
  } while (std::next_permutation(row_order.begin(), row_order.end()));

  result.phc_score = best_score;
  for (std::size_t r = 0; r < n; ++r)
    result.schedule.entries.push_back({best_rows[r], perms[best_perms[r]]});
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace prefixopt
