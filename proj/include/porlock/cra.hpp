#pragma once

#include <functional>

#include "porlock/model.hpp"

namespace porlock {

// Constraint (X, Y): before/after proposition pair over the shared variables a
// transition changed, exported to processes that depend on those variables.
// X and Y valuate the same variables and differ (X != Y by construction).
struct Constraint {
  ProcId source = 0;
  ProcId target = 0;
  std::vector<Proposition> x;  // sorted by var
  std::vector<Proposition> y;  // same vars as x

  bool same_rewrite(const Constraint& o) const { return x == o.x && y == o.y; }
  bool operator==(const Constraint&) const = default;
};

struct LoggedConstraint {
  int iteration = 0;
  Constraint constraint;
  bool operator==(const LoggedConstraint&) const = default;
};

struct CraOptions {
  bool reverse_schedule = false;  // iterate processes in reverse (determinism checks)
  // Called after each iteration with the iteration number and current SGs.
  std::function<void(int, const std::vector<StateGraph>&)> on_iteration;
};

struct CraResult {
  std::vector<StateGraph> sgs;  // one per process, in process order
  std::vector<LoggedConstraint> log;
  int iterations = 0;
};

// Compositional local state-graph construction: alternates per-process local
// reachability closure with cross-process constraint extraction/application
// until no SG gains a state or edge. The resulting SGs over-approximate the
// per-process projections of the reachable global state space.
CraResult build_local_sgs(const SystemDef& sys, const CraOptions& options = {});

// Constraints arising from an edge range of process `p` toward each neighbor
// that shares a changed variable. Edges are (src, dst) index pairs into
// sgs[p].out traversal; exposed for targeted use as (state, edge) pairs.
std::vector<Constraint> extract_constraints(const SystemDef& sys, const StateGraph& g, ProcId p,
                                            const std::vector<std::pair<StateId, OutEdge>>& edges);

// Applies one constraint to a state graph: for every state whose labeling
// contains X, ensures the rewritten state and an environment edge to it
// exist. Returns the number of states plus edges added; idempotent.
size_t apply_constraint(const SystemDef& sys, StateGraph& g, const Constraint& c);

// Local reachability closure of one process SG: from every non-fail state,
// fire every enabled own transition, interning targets, until closed.
// Returns true if anything was added.
bool local_closure(const SystemDef& sys, StateGraph& g, ProcId p);

// Fresh single-state SG for a process (initial labeling only).
StateGraph init_local_sg(const SystemDef& sys, ProcId p);

}  // namespace porlock
