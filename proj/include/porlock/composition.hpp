#pragma once

#include "porlock/model.hpp"

namespace porlock {

// Asynchronous parallel composition of two state graphs. Composite states are
// pairs agreeing on the propositions of the shared variables; edges are
// lone moves that leave shared labels unchanged (clauses b/c) or synchronized
// moves that change them consistently in both components (clause d); no moves
// leave a pair with a failing component. Only states reachable from the
// initial pair are constructed. Throws if the initial states disagree on the
// shared propositions.
//
// Synchronized edges are tagged with the real writer's transition id when the
// other side is an environment echo; env/env pairs stay environment edges.
StateGraph compose(const SystemDef& sys, const StateGraph& a, const StateGraph& b);

// Isomorphism by labeling: equal initial labelings, equal labeled state sets,
// equal edge sets under the labeling bijection (tags included).
bool isomorphic(const StateGraph& a, const StateGraph& b);

}  // namespace porlock
