// Orders a mixed bag of query filters so the expensive model call runs last.

#include <cstdio>
#include <vector>

#include "prefixopt/cost.hpp"

using namespace prefixopt;

int main() {
  // per-row costs in arbitrary units; the model call dwarfs everything else
  std::vector<FilterPredicate> predicates{
      {"llm_is_positive", 0.55, 900.0},
      {"review_type = Fresh", 0.70, 0.01},
      {"top_critic = false", 0.85, 0.01},
      {"price > 15", 0.40, 0.02},
  };

  auto order = plan_filter_order(predicates);
  std::printf("execution order (expected %.2f units/row, naive %.2f):\n",
              expected_filter_cost(predicates, order),
              expected_filter_cost(predicates, {0, 1, 2, 3}));
  for (std::size_t i : order)
    std::printf("  %s  (selectivity %.2f, cost %.2f)\n", predicates[i].name.c_str(),
                predicates[i].selectivity, predicates[i].per_row_cost);
  return 0;
}
