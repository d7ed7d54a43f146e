#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "prefixopt/ggr.hpp"
#include "prefixopt/ophr.hpp"
#include "test_util.hpp"

using namespace prefixopt;
using testutil::make_table;

namespace {

const Tokenizer& tok = char_tokenizer();

// No early stopping: unlimited depths, zero threshold.
GgrConfig exact_cfg() {
  GgrConfig cfg;
  cfg.row_recursion_depth = 1u << 20;
  cfg.column_recursion_depth = 1u << 20;
  cfg.hitcount_stop_threshold = 0;
  return cfg;
}

// Every field determined bidirectionally by every other: rows are copies of
// per-entity tuples whose values are unique per (entity, field).
Table fd_covered_table(std::mt19937& rng, int max_rows, int max_fields) {
  std::uniform_int_distribution<int> nd(2, max_rows), md(2, max_fields);
  int n = nd(rng), m = md(rng);
  std::uniform_int_distribution<int> entity_count(1, n);
  std::uniform_int_distribution<int> len(1, 3);
  int entities = entity_count(rng);
  std::vector<std::vector<std::string>> tuples(entities);
  for (int e = 0; e < entities; ++e)
    for (int f = 0; f < m; ++f)
      tuples[e].push_back(std::string(len(rng), char('a' + e * m + f)));
  std::vector<std::string> fields;
  for (int f = 0; f < m; ++f) fields.push_back("f" + std::to_string(f));
  std::vector<std::vector<std::string>> rows(n);
  std::uniform_int_distribution<int> pick(0, entities - 1);
  for (auto& row : rows) row = tuples[pick(rng)];
  return make_table(std::move(fields), std::move(rows));
}

FunctionalDependencySet all_fields_group(const Table& t) {
  FunctionalDependencySet fds;
  fds.groups.push_back(t.field_names());
  return fds;
}

RequestSchedule whole_table_fallback(const Table& t, StatsScoreVariant variant) {
  ColumnStats stats = compute_stats(t, tok);
  return sort_rows_fixed_order(t, fixed_order_by_hitcount_stats(stats, variant));
}

}  // namespace

TEST_CASE("hitcount scores a repeated value") {
  // value of length 2 in 3 of 4 rows
  Table t = make_table({"c", "d"},
                       {{"vv", "x"}, {"vv", "y"}, {"vv", "z"}, {"qq", "w"}});
  HitCountResult res = hitcount(t, "c", "vv", {}, tok);
  CHECK(res.score == doctest::Approx(8.0));  // 2^2 * (3-1)
  CHECK(res.fields == std::vector<std::string>{"c"});
}

TEST_CASE("hitcount adds the mean length of FD partners linearly") {
  Table t = make_table({"c", "d"}, {{"vv", "www"}, {"vv", "www"}, {"vv", "www"}});
  FunctionalDependencySet fds{{{"c", "d"}}};
  HitCountResult res = hitcount(t, "c", "vv", fds, tok);
  CHECK(res.score == doctest::Approx(14.0));  // (4 + 3) * 2
  CHECK(res.fields == std::vector<std::string>{"c", "d"});
}

TEST_CASE("hitcount of a unique value is zero") {
  Table t = make_table({"c"}, {{"a"}, {"b"}});
  CHECK(hitcount(t, "c", "a", {}, tok).score == doctest::Approx(0.0));
}

TEST_CASE("hitcount errors") {
  Table t = make_table({"c"}, {{"a"}});
  CHECK_THROWS_AS(hitcount(t, "c", "zz", {}, tok), domain_error);
  CHECK_THROWS_AS(hitcount(t, "nope", "a", {}, tok), schema_error);
}

TEST_CASE("stats-score variants rank fields as specified") {
  ColumnStats stats;
  stats.total_rows = 10;
  stats.fields = {{"id", 10, 2.0}, {"constant", 1, 4.0}, {"mixed", 2, 3.0}};

  // all-distinct field scores 0 under the weighted form and ranks last
  auto weighted = fixed_order_by_hitcount_stats(stats);
  CHECK(weighted.back() == 0);
  // constant field: 16 * (10/1 - 1) = 144 beats mixed 9 * 4 = 36
  CHECK(weighted.front() == 1);

  // squared form ignores cardinality entirely
  auto squared = fixed_order_by_hitcount_stats(stats, StatsScoreVariant::squared_length);
  CHECK(squared == std::vector<int>{1, 2, 0});

  // a long low-cardinality description outranks a one-token two-valued flag
  ColumnStats movies;
  movies.total_rows = 100;
  movies.fields = {{"review_type", 2, 1.0}, {"movie_info", 50, 40.0}};
  CHECK(fixed_order_by_hitcount_stats(movies).front() == 1);
}

TEST_CASE("greedy matches the optimum on the distinct-first family") {
  for (int n : {2, 4, 7, 10}) {
    Table t = testutil::distinct_first_table(n, 3);
    SolveResult res = ggr(t, {}, exact_cfg(), tok);
    CHECK(res.phc_score == std::uint64_t(2 * (n - 1)));
    CHECK(phc(res.schedule, t, tok) == res.phc_score);
  }
}

TEST_CASE("greedy matches the optimum on the per-field group family") {
  for (int x : {2, 3}) {
    Table t = testutil::group_per_field_table(x, 3);
    SolveResult res = ggr(t, {}, exact_cfg(), tok);
    CHECK(res.phc_score == std::uint64_t(3 * (x - 1)));
  }
}

TEST_CASE("defaults early-stop tiny tables into the statistics fallback") {
  // max hitcount on this table is far below the default 100k threshold
  Table t = testutil::group_per_field_table(2, 3);
  SolveResult res = ggr(t, {}, GgrConfig{}, tok);
  RequestSchedule fallback =
      whole_table_fallback(t, StatsScoreVariant::cardinality_weighted_squared);
  REQUIRE(res.schedule.size() == fallback.size());
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    CHECK(res.schedule.entries[i].row_id == fallback.entries[i].row_id);
    CHECK(res.schedule.entries[i].field_order == fallback.entries[i].field_order);
  }
}

TEST_CASE("reported score equals the objective recomputed on the schedule") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    Table t = testutil::random_table(rng, 6, 4);
    for (auto cfg : {exact_cfg(), GgrConfig{}}) {
      SolveResult res = ggr(t, {}, cfg, tok);
      validate_schedule(res.schedule, t);
      CHECK(res.schedule.size() == t.row_count());
      CHECK(phc(res.schedule, t, tok) == res.phc_score);
    }
  }
}

TEST_CASE("greedy never beats the exact solver") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    Table t = testutil::random_table(rng, 4, 3);
    std::uint64_t greedy = ggr(t, {}, exact_cfg(), tok).phc_score;
    std::uint64_t exact = ophr(t, tok).phc_score;
    CAPTURE(trial);
    CHECK(greedy <= exact);
  }
}

TEST_CASE("greedy is never worse than its own whole-table fallback") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 120; ++trial) {
    Table t = testutil::random_table(rng, 6, 4);
    SolveResult res = ggr(t, {}, exact_cfg(), tok);
    std::uint64_t fallback_score =
        phc(whole_table_fallback(t, StatsScoreVariant::cardinality_weighted_squared), t, tok);
    CAPTURE(trial);
    CHECK(res.phc_score >= fallback_score);
  }
}

TEST_CASE("a field that determines all others makes greedy optimal") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    Table t = fd_covered_table(rng, 4, 3);
    FunctionalDependencySet fds = all_fields_group(t);
    REQUIRE(validate_fds(t, fds).all_satisfied());
    std::uint64_t greedy = ggr(t, fds, exact_cfg(), tok).phc_score;
    std::uint64_t exact = ophr(t, tok).phc_score;
    CAPTURE(trial);
    CHECK(greedy == exact);
  }
}

TEST_CASE("FDs shrink the candidate scan") {
  // duplicate-heavy FD-consistent pair of fields plus a distinct one
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 12; ++i) {
    std::string key = "k" + std::to_string(i % 3);
    std::string info = "info" + std::to_string(i % 3);
    rows.push_back({key, info, "u" + std::to_string(i)});
  }
  Table t = make_table({"key", "info", "unique"}, rows);
  FunctionalDependencySet fds{{{"key", "info"}}};
  REQUIRE(validate_fds(t, fds).all_satisfied());

  GgrConfig with = exact_cfg();
  GgrConfig without = exact_cfg();
  without.use_fds = false;

  SolveResult res_with = ggr(t, fds, with, tok);
  SolveResult res_without = ggr(t, fds, without, tok);
  CHECK(res_with.stats.candidates_examined < res_without.stats.candidates_examined);
  validate_schedule(res_with.schedule, t);
  CHECK(res_with.schedule.size() == t.row_count());
}

TEST_CASE("recursion depth stays within the dimension-reduction bound") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    Table t = testutil::random_table(rng, 8, 4);
    SolveResult res = ggr(t, {}, exact_cfg(), tok);
    CHECK(res.stats.max_depth <= t.row_count() + t.field_count());
  }
}

TEST_CASE("depth limits trigger the fallback") {
  GgrConfig cfg = exact_cfg();
  cfg.row_recursion_depth = 0;
  cfg.column_recursion_depth = 0;
  // one split is allowed (depth 0), the A/B children (depth 1) must fall back
  Table t = testutil::group_per_field_table(3, 3);
  SolveResult res = ggr(t, {}, cfg, tok);
  validate_schedule(res.schedule, t);
  CHECK(res.schedule.size() == t.row_count());
}

TEST_CASE("deterministic output across runs") {
  std::mt19937 rng(61);
  Table t = testutil::random_table(rng, 8, 4);
  SolveResult a = ggr(t, {}, exact_cfg(), tok);
  SolveResult b = ggr(t, {}, exact_cfg(), tok);
  REQUIRE(a.schedule.size() == b.schedule.size());
  for (std::size_t i = 0; i < a.schedule.size(); ++i) {
    CHECK(a.schedule.entries[i].row_id == b.schedule.entries[i].row_id);
    CHECK(a.schedule.entries[i].field_order == b.schedule.entries[i].field_order);
  }
}

TEST_CASE("degenerate tables fall through the base cases") {
  Table empty = make_table({"a"}, {});
  CHECK(ggr(empty, {}, GgrConfig{}, tok).schedule.size() == 0);

  Table one = make_table({"a", "b"}, {{"1", "2"}});
  SolveResult res = ggr(one, {}, GgrConfig{}, tok);
  CHECK(res.phc_score == 0);
  REQUIRE(res.schedule.size() == 1);
  CHECK(res.schedule.entries[0].field_order == std::vector<int>{0, 1});
}
