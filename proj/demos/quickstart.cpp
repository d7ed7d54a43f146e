// Loads a review table, reorders it three ways and compares the prefix hit
// count, the simulated cache hit rate and the estimated spend.
//
//   ./quickstart demos/data/movie_reviews.csv demos/data/movie_fds.json

#include <cstdio>
#include <string>
#include <vector>

#include "prefixopt/cache_sim.hpp"
#include "prefixopt/cost.hpp"
#include "prefixopt/ggr.hpp"
#include "prefixopt/objective.hpp"
#include "prefixopt/table.hpp"

using namespace prefixopt;

int main(int argc, char** argv) {
  std::string table_path = argc > 1 ? argv[1] : "demos/data/movie_reviews.csv";
  std::string fd_path = argc > 2 ? argv[2] : "demos/data/movie_fds.json";

  Table t = load_table_file(table_path, TableFormat::csv);
  FunctionalDependencySet fds = load_fd_config_file(fd_path);
  if (!validate_fds(t, fds).all_satisfied()) {
    std::fprintf(stderr, "fd config does not hold on this table\n");
    return 1;
  }

  const Tokenizer& tok = char_tokenizer();
  const std::string system_prompt =
      "You are a data analyst. Use the provided JSON data to answer the user query.";
  const std::string question = "Is this movie suitable for kids? Answer Yes or No.";

  GgrConfig cfg;
  cfg.hitcount_stop_threshold = 0;  // tiny table: let the recursion run

  struct Candidate {
    const char* name;
    RequestSchedule schedule;
  };
  std::vector<Candidate> candidates;
  candidates.push_back({"original", original_order_schedule(t)});
  candidates.push_back(
      {"fixed-stats", sort_rows_fixed_order(t, fixed_order_by_stats(compute_stats(t, tok)))});
  candidates.push_back({"ggr", ggr(t, fds, cfg, tok).schedule});

  PricingModel pricing = builtin_pricing("gpt-4o-mini");
  double baseline_dollars = 0.0;

  std::printf("%-12s %10s %8s %12s %9s\n", "schedule", "phc", "phr", "est. cost", "savings");
  for (const Candidate& c : candidates) {
    SimReport sim = phr_for_schedule(c.schedule, t, system_prompt, question, {}, tok);
    CostReport cost = estimate_cost(sim, {}, pricing);
    if (baseline_dollars == 0.0) baseline_dollars = cost.dollars;
    std::printf("%-12s %10llu %7.1f%% %11.6f$ %8.1f%%\n", c.name,
                (unsigned long long)phc(c.schedule, t, tok), 100.0 * sim.phr, cost.dollars,
                100.0 * (1.0 - cost.dollars / baseline_dollars));
  }
  return 0;
}
