#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adp/dichotomy.hpp"
#include "adp/engine.hpp"
#include "adp/query.hpp"

namespace adp {

enum class Mode { Count, Report };
enum class Heuristic { Auto, Greedy, Drastic };

struct AdpResult {
  long long cost = 0;
  std::optional<RemovalSet> removals;  // present in Report mode
  long long removed_outputs = 0;
  bool exact = false;
  // Dispatch stages taken, outermost first, deduplicated.
  std::vector<std::string> path;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimum number of input deletions that remove at least k output tuples.
// Applies selections first, then dispatches: boolean min-cut, singleton,
// universal-attribute DP, component DP, and finally the greedy heuristics for
// hard residuals. Requires 1 <= k <= |Q(D)|.
AdpResult compute_adp(const Query& q, const Instance& d, long long k,
                      Mode mode = Mode::Count, Heuristic h = Heuristic::Auto);

// Exact stages, exposed for direct testing. All expect selection-free input
// and a feasible k.
AdpResult solve_boolean(const Query& q, const Instance& d, Mode mode);
AdpResult solve_singleton(const Query& q, const Instance& d, long long k, Mode mode);
AdpResult solve_universe(const Query& q, const Instance& d, long long k, Mode mode);
AdpResult solve_decompose(const Query& q, const Instance& d, long long k, Mode mode);

// Heuristics. greedy_for_cq works on any CQ; drastic_greedy_full requires a
// full CQ and removes from a single relation.
AdpResult greedy_for_cq(const Query& q, const Instance& d, long long k, Mode mode);
AdpResult drastic_greedy_full(const Query& q, const Instance& d, long long k,
                              Mode mode);

}  // namespace adp
