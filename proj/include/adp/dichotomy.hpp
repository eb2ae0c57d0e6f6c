#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "adp/query.hpp"

namespace adp {

// One node of the decision procedure's derivation. Every node first removes
// the universal attributes (possibly none), then records which base case or
// decomposition applied to the residual query.
struct TraceNode;

struct BaseBoolean {
  std::optional<TriadLike> triad;  // ids refer to the residual boolean query
};
struct BaseVacuum {
  int relation;
};
struct BaseOthers {
  Query subquery;  // connected, non-boolean, vacuum-free residual
};
struct Decomposed {
  std::vector<TraceNode> components;
};

struct TraceNode {
  std::vector<Attr> removed_universal;
  std::variant<BaseBoolean, BaseVacuum, BaseOthers, Decomposed> step;
  bool verdict = false;
};

using DecisionTrace = TraceNode;

// The procedural decision: strip universal attributes, then dispatch on
// boolean / vacuum / disconnected, recursing into components; anything else
// is not solvable in polynomial time.
DecisionTrace is_ptime(const Query& q);

// Re-runs each recorded step against q and checks that it matches what the
// procedure would do. Returns the verdict the trace proves. Throws QueryError
// when the trace does not fit the query.
bool replay_trace(const Query& q, const DecisionTrace& trace);

struct Classification {
  bool ptime = false;
  std::optional<HardStructure> structure;  // present iff !ptime
  DecisionTrace trace;
};

struct InternalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs both the procedural decision and the structural witness search and
// cross-checks them; a disagreement throws InternalInconsistency. Selections
// are ignored: solvability is a property of the query shape.
Classification classify(const Query& q);

}  // namespace adp
