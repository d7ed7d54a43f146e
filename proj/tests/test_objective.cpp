#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "prefixopt/objective.hpp"

using namespace prefixopt;

namespace {

const Tokenizer& tok = char_tokenizer();

Table table_from(std::vector<std::string> fields, std::vector<std::vector<std::string>> rows) {
  return Table(std::move(fields), std::move(rows));
}

// Rows: first field all distinct, remaining m-1 fields constant, every cell
// one character.
Table distinct_first_table(int n, int m) {
  std::vector<std::string> fields;
  for (int f = 0; f < m; ++f) fields.push_back("f" + std::to_string(f));
  std::vector<std::vector<std::string>> rows(n);
  for (int r = 0; r < n; ++r) {
    rows[r].push_back(std::string(1, char('a' + r)));
    for (int f = 1; f < m; ++f) rows[r].push_back(std::string(1, char('A' + f)));
  }
  return table_from(fields, rows);
}

// Straight-line re-computation of the objective from the entry data, kept
// independent of hit()/phc() internals.
std::uint64_t naive_phc(const RequestSchedule& s, const Table& t) {
  std::uint64_t total = 0;
  for (std::size_t r = 1; r < s.entries.size(); ++r) {
    const auto& cur = s.entries[r];
    const auto& prev = s.entries[r - 1];
    std::size_t p = 0;
    while (p < cur.field_order.size() && p < prev.field_order.size()) {
      int f = cur.field_order[p];
      if (f != prev.field_order[p]) break;
      if (t.cell(cur.row_id, f) != t.cell(prev.row_id, f)) break;
      std::uint64_t len = t.cell(cur.row_id, f).size();
      total += len * len;
      ++p;
    }
  }
  return total;
}

RequestSchedule two_row_schedule(std::vector<int> order) {
  RequestSchedule s;
  s.entries.push_back({0, order});
  s.entries.push_back({1, order});
  return s;
}

}  // namespace

TEST_CASE("hit sums squared lengths over the matching leading run") {
  Table t = table_from({"A", "B", "C"}, {{"ab", "c", "xyz"}, {"ab", "c", "zzz"}});
  RequestSchedule s = two_row_schedule({0, 1, 2});
  CHECK(hit(s, 1, t, tok) == 5);  // 2^2 + 1^2
  CHECK(hit(s, 0, t, tok) == 0);
}

TEST_CASE("hit is zero on a first-cell mismatch") {
  Table t = table_from({"A", "B"}, {{"p", "s"}, {"q", "s"}});
  RequestSchedule s = two_row_schedule({0, 1});
  CHECK(hit(s, 1, t, tok) == 0);
}

TEST_CASE("substring overlap earns nothing") {
  Table t = table_from({"A"}, {{"ab"}, {"abc"}});
  RequestSchedule s = two_row_schedule({0});
  CHECK(hit(s, 1, t, tok) == 0);
}

TEST_CASE("equal values under different field labels do not match") {
  Table t = table_from({"A", "B"}, {{"x", "x"}, {"x", "x"}});
  RequestSchedule s;
  s.entries.push_back({0, {0, 1}});
  s.entries.push_back({1, {1, 0}});
  CHECK(hit(s, 1, t, tok) == 0);
}

TEST_CASE("hit bounds checking") {
  Table t = table_from({"A"}, {{"x"}});
  RequestSchedule s;
  s.entries.push_back({0, {0}});
  CHECK_THROWS_AS(hit(s, 1, t, tok), domain_error);
}

TEST_CASE("full-row matches credit every field") {
  Table t = table_from({"A"}, {{"xx"}, {"xx"}});
  RequestSchedule s = two_row_schedule({0});
  CHECK(hit(s, 1, t, tok) == 4);
}

TEST_CASE("fragment scoring counts the rendered label too") {
  Table t = table_from({"A"}, {{"xx"}, {"xx"}});
  RequestSchedule s = two_row_schedule({0});
  // fragment is `"A": "xx", ` = 11 chars
  CHECK(hit(s, 1, t, tok, SegmentScoring::full_fragment) == 121);
}

TEST_CASE("distinct-first table: schema order scores zero, constants-first scores 2(n-1)") {
  Table t = distinct_first_table(4, 3);
  CHECK(phc(original_order_schedule(t), t, tok) == 0);

  RequestSchedule optimized;
  for (std::size_t r = 0; r < 4; ++r) optimized.entries.push_back({r, {1, 2, 0}});
  CHECK(phc(optimized, t, tok) == 6);  // (4-1) * (1^2 + 1^2)
}

TEST_CASE("single-row schedule scores zero") {
  Table t = table_from({"A", "B"}, {{"abc", "d"}});
  RequestSchedule s;
  s.entries.push_back({0, {0, 1}});
  CHECK(phc(s, t, tok) == 0);
}

TEST_CASE("phc equals the independent recomputation on random tables") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> sym(0, 1);
  std::uniform_int_distribution<int> len(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::string>> rows(3);
    for (auto& row : rows)
      for (int f = 0; f < 3; ++f) {
        std::string v;
        for (int k = len(rng); k-- > 0;) v += char('a' + sym(rng));
        row.push_back(v);
      }
    Table t = table_from({"x", "y", "z"}, rows);

    RequestSchedule s;
    std::vector<std::size_t> order{0, 1, 2};
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t r : order) {
      std::vector<int> fields{0, 1, 2};
      std::shuffle(fields.begin(), fields.end(), rng);
      s.entries.push_back({r, fields});
    }
    CHECK(phc(s, t, tok) == naive_phc(s, t));
  }
}

TEST_CASE("phc depends only on the rendered content sequence") {
  std::vector<std::vector<std::string>> contents = {{"a", "p"}, {"b", "p"}, {"a", "q"}};
  Table t1 = table_from({"A", "B"}, {contents[0], contents[1], contents[2]});
  Table t2 = table_from({"A", "B"}, {contents[2], contents[0], contents[1]});
  // same content sequence: rows 0,1,2 of t1 are rows 1,2,0 of t2
  RequestSchedule s1, s2;
  for (std::size_t r : {0, 1, 2}) s1.entries.push_back({r, {1, 0}});
  for (std::size_t r : {1, 2, 0}) s2.entries.push_back({r, {1, 0}});
  CHECK(phc(s1, t1, tok) == phc(s2, t2, tok));
}

TEST_CASE("phc is zero when leading segments are pairwise distinct") {
  Table t = distinct_first_table(6, 2);
  RequestSchedule s = original_order_schedule(t);
  CHECK(phc(s, t, tok) == 0);
}

TEST_CASE("sorted single-field schedule achieves the closed form") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> sym(0, 2);
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<int> nrows(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    int n = nrows(rng);
    std::vector<std::vector<std::string>> rows(n);
    for (auto& row : rows) {
      std::string v;
      for (int k = len(rng); k-- > 0;) v += char('a' + sym(rng));
      row.push_back(v);
    }
    Table t = table_from({"v"}, rows);
    RequestSchedule s = sort_rows_fixed_order(t, {0});

    std::map<std::string, std::uint64_t> counts;
    for (int r = 0; r < n; ++r) counts[t.cell(r, 0)]++;
    std::uint64_t expected = 0;
    for (auto& [v, c] : counts) expected += std::uint64_t(v.size()) * v.size() * (c - 1);
    CHECK(phc(s, t, tok) == expected);
  }
}

TEST_CASE("sort_rows_fixed_order sorts by rendered bytes, stable on ties") {
  Table t = table_from({"k"}, {{"b"}, {"a"}, {"a"}});
  RequestSchedule s = sort_rows_fixed_order(t, {0});
  CHECK(s.entries[0].row_id == 1);
  CHECK(s.entries[1].row_id == 2);
  CHECK(s.entries[2].row_id == 0);

  Table same = table_from({"k"}, {{"x"}, {"x"}, {"x"}});
  RequestSchedule s2 = sort_rows_fixed_order(same, {0});
  CHECK(s2.entries[0].row_id == 0);
  CHECK(s2.entries[1].row_id == 1);
  CHECK(s2.entries[2].row_id == 2);
}

TEST_CASE("sorting groups duplicate rows adjacently") {
  Table t = table_from({"a", "b", "c"},
                       {{"1", "2", "3"}, {"4", "5", "6"}, {"1", "2", "3"}, {"4", "5", "6"}});
  RequestSchedule interleaved = original_order_schedule(t);
  RequestSchedule sorted = sort_rows_fixed_order(t, {0, 1, 2});
  CHECK(phc(interleaved, t, tok) == 0);
  CHECK(phc(sorted, t, tok) == 6);  // two adjacent duplicate pairs, 3 unit fields each
  CHECK(sorted.entries[0].row_id == 0);
  CHECK(sorted.entries[1].row_id == 2);
}

TEST_CASE("sort_rows_fixed_order validates the permutation") {
  Table t = table_from({"a", "b"}, {{"1", "2"}});
  CHECK_THROWS_AS(sort_rows_fixed_order(t, {0}), schema_error);
  CHECK_THROWS_AS(sort_rows_fixed_order(t, {0, 0}), schema_error);
}

TEST_CASE("fixed_order_by_stats prefers long, repeated columns") {
  ColumnStats stats;
  stats.total_rows = 10;
  stats.fields = {{"flag", 10, 10.0}, {"desc", 2, 10.0}};
  auto order = fixed_order_by_stats(stats);
  CHECK(order == std::vector<int>{1, 0});  // same length, lower cardinality wins

  ColumnStats tied;
  tied.total_rows = 10;
  tied.fields = {{"a", 2, 5.0}, {"b", 2, 5.0}};
  CHECK(fixed_order_by_stats(tied) == std::vector<int>{0, 1});

  // long low-cardinality description vs one-token two-valued flag
  ColumnStats movies;
  movies.total_rows = 100;
  movies.fields = {{"review_type", 2, 1.0}, {"movie_info", 2, 10.0}};
  CHECK(fixed_order_by_stats(movies) == std::vector<int>{1, 0});
}

TEST_CASE("render_segment carries the canonical fragment and its length") {
  RenderedSegment seg = render_segment("A", "ab", tok);
  CHECK(seg.fragment == "\"A\": \"ab\", ");
  CHECK(seg.token_len == 2);  // value-only default
  CHECK(render_segment("A", "ab", tok, SegmentScoring::full_fragment).token_len ==
        seg.fragment.size());
  CHECK(render_segment("A", "", tok).token_len == 0);
}

TEST_CASE("render_prompt emits keys in entry order with escaping") {
  Table t = table_from({"a", "b"}, {{"1", "2"}});
  ScheduleEntry e{0, {1, 0}};
  CHECK(render_body(e, t) == "{\"b\": \"2\", \"a\": \"1\"}");
  CHECK(render_prompt(e, t, "", "") == "{\"b\": \"2\", \"a\": \"1\"}");
  CHECK(render_prompt(e, t, "You are a data analyst.", "How many?") ==
        "You are a data analyst.\nHow many?\n{\"b\": \"2\", \"a\": \"1\"}");

  Table quoted = table_from({"q"}, {{"say \"hi\"\n"}});
  ScheduleEntry qe{0, {0}};
  CHECK(render_body(qe, quoted) == "{\"q\": \"say \\\"hi\\\"\\n\"}");
}

TEST_CASE("rows agreeing on their first k ordered fields share the covering byte prefix") {
  Table t = table_from({"a", "b", "c"}, {{"xx", "y", "p"}, {"xx", "y", "q"}});
  ScheduleEntry e0{0, {0, 1, 2}};
  ScheduleEntry e1{1, {0, 1, 2}};
  std::string p0 = render_prompt(e0, t, "sys", "q");
  std::string p1 = render_prompt(e1, t, "sys", "q");
  std::string expected_prefix = "sys\nq\n{\"a\": \"xx\", \"b\": \"y\", ";
  CHECK(p0.substr(0, expected_prefix.size()) == expected_prefix);
  CHECK(p1.substr(0, expected_prefix.size()) == expected_prefix);
}

TEST_CASE("validate_schedule rejects duplicates and unknown fields") {
  Table t = table_from({"a"}, {{"1"}, {"2"}});
  RequestSchedule dup;
  dup.entries.push_back({0, {0}});
  dup.entries.push_back({0, {0}});
  CHECK_THROWS_AS(validate_schedule(dup, t), schema_error);

  RequestSchedule bad_field;
  bad_field.entries.push_back({0, {3}});
  CHECK_THROWS_AS(validate_schedule(bad_field, t), schema_error);

  RequestSchedule repeat_field;
  repeat_field.entries.push_back({0, {0, 0}});
  CHECK_THROWS_AS(validate_schedule(repeat_field, t), schema_error);
}
