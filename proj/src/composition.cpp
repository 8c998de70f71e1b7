#include "porlock/composition.hpp"

#include <algorithm>
#include <set>

namespace porlock {

namespace {

// Projection of a state's labeling onto the shared slots.
std::vector<Value> project(const StateGraph& g, StateId s, const std::vector<int32_t>& slots) {
  std::vector<Value> vals(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) vals[i] = g.labels[s][slots[i]];
  return vals;
}

}  // namespace

StateGraph compose(const SystemDef& sys, const StateGraph& a, const StateGraph& b) {
  StateGraph g;
  g.owner = -1;
  g.owner_name = a.owner_name + "||" + b.owner_name;

  // C: propositions on the shared variables V_a intersect V_b.
  std::vector<VarId> shared;
  std::set_intersection(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                        std::back_inserter(shared));
  std::vector<int32_t> a_shared_slots, b_shared_slots;
  for (VarId v : shared) {
    a_shared_slots.push_back(a.slot_of[v]);
    b_shared_slots.push_back(b.slot_of[v]);
  }

  std::vector<VarId> vars;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(vars));
  g.vars = vars;
  g.slot_of.assign(sys.vars.size(), -1);
  for (size_t i = 0; i < vars.size(); ++i) g.slot_of[vars[i]] = static_cast<int32_t>(i);

  auto union_label = [&](StateId sa, StateId sb) {
    Labeling l(vars.size());
    for (size_t i = 0; i < a.vars.size(); ++i) l[g.slot_of[a.vars[i]]] = a.labels[sa][i];
    for (size_t i = 0; i < b.vars.size(); ++i) l[g.slot_of[b.vars[i]]] = b.labels[sb][i];
    return l;
  };

  if (project(a, a.initial, a_shared_slots) != project(b, b.initial, b_shared_slots))
    throw Error(ErrorKind::CompositionMismatch,
                "compose: initial states disagree on shared propositions");

  // Pair ids; composite states interned by union labeling (which determines
  // the pair, since each side is labeling-unique).
  struct Pair {
    StateId sa, sb;
  };
  std::vector<Pair> pairs;
  auto intern_pair = [&](StateId sa, StateId sb) {
    auto [id, inserted] = g.intern(union_label(sa, sb), a.fail[sa] || b.fail[sb]);
    if (inserted) pairs.push_back(Pair{sa, sb});
    return std::pair(id, inserted);
  };

  g.initial = intern_pair(a.initial, b.initial).first;

  // Worklist reachability per the composition's transition clauses.
  for (StateId cur = 0; cur < pairs.size(); ++cur) {
    auto [sa, sb] = pairs[cur];
    if (a.fail[sa] || b.fail[sb]) continue;  // clause (a): no moves from fail states

    auto ca = project(a, sa, a_shared_slots);
    auto cb = project(b, sb, b_shared_slots);

    // Clause (b): a-side moves alone when its shared labels are unchanged.
    for (const auto& e : a.out[sa]) {
      if (project(a, e.dst, a_shared_slots) != ca) continue;
      g.add_edge(cur, e.tid, intern_pair(e.dst, sb).first, 'b');
    }
    // Clause (c): symmetric for the b side.
    for (const auto& e : b.out[sb]) {
      if (project(b, e.dst, b_shared_slots) != cb) continue;
      g.add_edge(cur, e.tid, intern_pair(sa, e.dst).first, 'c');
    }
    // Clause (d): both sides move and the shared labels change consistently.
    for (const auto& ea : a.out[sa]) {
      auto ca2 = project(a, ea.dst, a_shared_slots);
      if (ca2 == ca) continue;
      for (const auto& eb : b.out[sb]) {
        auto cb2 = project(b, eb.dst, b_shared_slots);
        if (cb2 == cb) continue;
        if (ca2 != cb2) continue;
        int32_t tag;
        if (ea.tid != kEnvEdge && eb.tid != kEnvEdge)
          tag = std::min(ea.tid, eb.tid);
        else if (ea.tid != kEnvEdge)
          tag = ea.tid;
        else if (eb.tid != kEnvEdge)
          tag = eb.tid;
        else
          tag = kEnvEdge;
        g.add_edge(cur, tag, intern_pair(ea.dst, eb.dst).first, 'd');
      }
    }
  }
  return g;
}

bool isomorphic(const StateGraph& a, const StateGraph& b) {
  if (a.vars != b.vars) return false;
  if (a.num_states() != b.num_states()) return false;
  if (a.labels[a.initial] != b.labels[b.initial]) return false;
  // Map a-states to b-states by labeling.
  std::vector<StateId> to_b(a.num_states());
  for (StateId s = 0; s < a.num_states(); ++s) {
    auto it = b.index.find(a.labels[s]);
    if (it == b.index.end()) return false;
    if (a.fail[s] != b.fail[it->second]) return false;
    to_b[s] = it->second;
  }
  auto edge_set = [](const StateGraph& g, auto remap) {
    std::set<std::tuple<StateId, int32_t, StateId>> es;
    for (StateId s = 0; s < g.num_states(); ++s)
      for (const auto& e : g.out[s]) es.emplace(remap(s), e.tid, remap(e.dst));
    return es;
  };
  auto ea = edge_set(a, [&](StateId s) { return to_b[s]; });
  auto eb = edge_set(b, [](StateId s) { return s; });
  return ea == eb;
}

}  // namespace porlock
