#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "prefixopt/cache_sim.hpp"
#include "prefixopt/errors.hpp"

namespace prefixopt {

// Which processed tokens incur the cache-write surcharge.
//   all_misses      — every token inserted into the cache is written
//   first_1024_only — only the uncached part of each request's first 1024
//                     tokens (conservative manual-breakpoint accounting)
//   none            — no write surcharge
enum class WriteFractionPolicy { all_misses, first_1024_only, none };

inline WriteFractionPolicy write_policy_by_name(std::string_view name) {
  if (name == "all-misses") return WriteFractionPolicy::all_misses;
  if (name == "first-1024") return WriteFractionPolicy::first_1024_only;
  if (name == "none") return WriteFractionPolicy::none;
  throw schema_error("unknown write policy: " + std::string(name) +
                     " (expected 'all-misses', 'first-1024' or 'none')");
}

inline std::string_view write_policy_name(WriteFractionPolicy p) {
  switch (p) {
    case WriteFractionPolicy::all_misses: return "all-misses";
    case WriteFractionPolicy::first_1024_only: return "first-1024";
    case WriteFractionPolicy::none: return "none";
  }
  return "all-misses";
}

struct PricingModel {
  std::string name;
  double uncached_input = 0.0;  // $ per 1M tokens
  double cached_read = 0.0;
  double cache_write = 0.0;
  double output = 0.0;
  std::uint64_t min_cacheable_prefix_tokens = 0;
  WriteFractionPolicy write_policy = WriteFractionPolicy::all_misses;

  void validate() const {
    if (uncached_input < 0 || cached_read < 0 || cache_write < 0 || output < 0)
      throw domain_error("pricing model " + name + ": prices must be non-negative");
    if (cached_read > uncached_input)
      throw domain_error("pricing model " + name +
                         ": cached reads cannot cost more than uncached input");
  }
};

inline PricingModel builtin_pricing(std::string_view name) {
  if (name == "gpt-4o-mini")
    return {"gpt-4o-mini", 0.15, 0.075, 0.15, 0.60, 1024, WriteFractionPolicy::none};
  if (name == "claude-3.5-sonnet")
    return {"claude-3.5-sonnet", 3.00, 0.30, 3.75, 15.00, 1024,
            WriteFractionPolicy::all_misses};
  throw schema_error("unknown pricing model: " + std::string(name) +
                     " (built-ins: gpt-4o-mini, claude-3.5-sonnet)");
}

// {name, uncached_input, cached_read, cache_write, output, min_prefix, write_policy}
inline PricingModel load_pricing(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw structural_error(std::string("pricing file: ") + e.what());
  }
  PricingModel p;
  p.name = doc.value("name", "custom");
  p.uncached_input = doc.value("uncached_input", 0.0);
  p.cached_read = doc.value("cached_read", 0.0);
  p.cache_write = doc.value("cache_write", p.uncached_input);
  p.output = doc.value("output", 0.0);
  p.min_cacheable_prefix_tokens = doc.value("min_prefix", std::uint64_t{0});
  p.write_policy = write_policy_by_name(doc.value("write_policy", "all-misses"));
  p.validate();
  return p;
}

inline PricingModel load_pricing_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open pricing file: " + path);
  return load_pricing(in);
}

struct CostReport {
  std::string pricing_name;
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;
  std::uint64_t hit_tokens = 0;
  std::uint64_t miss_tokens = 0;
  std::uint64_t write_tokens = 0;
  double dollars = 0.0;
};

// Dollar estimate for a replay: misses bill at the uncached rate, credited
// hits at the cached-read rate, written tokens add the write surcharge over
// the uncached rate, outputs bill at the output rate.
inline CostReport estimate_cost(const SimReport& sim,
                                const std::vector<std::uint64_t>& out_tokens_per_request,
                                const PricingModel& p) {
  p.validate();
  if (!out_tokens_per_request.empty() &&
      out_tokens_per_request.size() != sim.requests.size())
    throw domain_error("estimate_cost: got " + std::to_string(out_tokens_per_request.size()) +
                       " output counts for " + std::to_string(sim.requests.size()) +
                       " requests");

  CostReport report;
  report.pricing_name = p.name;
  for (std::size_t i = 0; i < sim.requests.size(); ++i) {
    const RequestSim& r = sim.requests[i];
    report.input_tokens += r.input_tokens;
    report.hit_tokens += r.hit_tokens;
    report.miss_tokens += r.miss_tokens;
    if (!out_tokens_per_request.empty()) report.output_tokens += out_tokens_per_request[i];
    switch (p.write_policy) {
      case WriteFractionPolicy::none:
        break;
      case WriteFractionPolicy::all_misses:
        report.write_tokens += r.written_tokens;
        break;
      case WriteFractionPolicy::first_1024_only: {
        std::uint64_t raw_hit = r.input_tokens - r.written_tokens;
        std::uint64_t head = std::min<std::uint64_t>(r.input_tokens, 1024);
        if (!r.uncacheable && head > raw_hit) report.write_tokens += head - raw_hit;
        break;
      }
    }
  }
  double surcharge = std::max(0.0, p.cache_write - p.uncached_input);
  report.dollars = (static_cast<double>(report.miss_tokens) * p.uncached_input +
                    static_cast<double>(report.hit_tokens) * p.cached_read +
                    static_cast<double>(report.write_tokens) * surcharge +
                    static_cast<double>(report.output_tokens) * p.output) /
                   1e6;
  return report;
}

// Fractional savings of `a` against baseline `b`: (b - a) / b.
inline double savings(const CostReport& a, const CostReport& b) {
  if (a.pricing_name != b.pricing_name)
    throw schema_error("savings: cost reports use different pricing models (" +
                       a.pricing_name + " vs " + b.pricing_name + ")");
  if (b.dollars == 0.0)
    throw domain_error("savings: baseline cost is zero, ratio undefined");
  return (b.dollars - a.dollars) / b.dollars;
}

struct DedupResult {
  std::vector<std::string> uniques;        // first-occurrence order
  std::vector<std::size_t> expansion_map;  // original index -> unique index
};

// Byte-exact deduplication. Expanding uniques through the map reproduces the
// original sequence exactly.
inline DedupResult dedup(const std::vector<std::string>& prompts) {
  DedupResult res;
  res.expansion_map.reserve(prompts.size());
  std::unordered_map<std::string_view, std::size_t> seen;
  for (const auto& p : prompts) {
    auto it = seen.find(p);
    if (it == seen.end()) {
      seen.emplace(p, res.uniques.size());
      res.expansion_map.push_back(res.uniques.size());
      res.uniques.push_back(p);
    } else {
      res.expansion_map.push_back(it->second);
    }
  }
  return res;
}

struct FilterPredicate {
  std::string name;
  double selectivity = 1.0;  // fraction of rows passing, in [0, 1]
  double per_row_cost = 0.0;
};

inline void validate_predicates(const std::vector<FilterPredicate>& preds) {
  for (const auto& p : preds) {
    if (p.selectivity < 0.0 || p.selectivity > 1.0)
      throw domain_error("filter predicate " + p.name + ": selectivity must be in [0, 1]");
    if (p.per_row_cost < 0.0)
      throw domain_error("filter predicate " + p.name + ": cost must be non-negative");
  }
}

// Expected per-input-row cost of running predicates in the given order:
// sum of cost_i * product of earlier selectivities.
inline double expected_filter_cost(const std::vector<FilterPredicate>& preds,
                                   const std::vector<std::size_t>& order) {
  double cost = 0.0;
  double pass = 1.0;
  for (std::size_t i : order) {
    cost += pass * preds.at(i).per_row_cost;
    pass *= preds.at(i).selectivity;
  }
  return cost;
}

// Cheapest execution order under the expected-cost model. Predicates are
// ranked by cost / (1 - selectivity): cheap selective filters run first,
// expensive ones (LLM calls) are pulled to the back. Free predicates rank
// first; pass-everything predicates rank last. Ties keep input order.
inline std::vector<std::size_t> plan_filter_order(const std::vector<FilterPredicate>& preds) {
  validate_predicates(preds);
  std::vector<double> rank(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const FilterPredicate& p = preds[i];
    if (p.per_row_cost == 0.0)
      rank[i] = 0.0;
    else if (p.selectivity >= 1.0)
      rank[i] = std::numeric_limits<double>::infinity();
    else
      rank[i] = p.per_row_cost / (1.0 - p.selectivity);
  }
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&rank](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  return order;
}

}  // namespace prefixopt
