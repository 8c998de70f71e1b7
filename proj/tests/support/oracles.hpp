#pragma once

// Independent oracles for the test suites. Everything here recomputes results
// from first principles (full guard evaluation over complete valuations,
// enumeration over explicitly built graphs) and stays independent of the
// implementation paths it checks.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "porlock/model.hpp"

namespace porlock::testing {

// Guard evaluation written directly against the definition, bypassing the
// library's evaluators and caches.
inline bool oracle_guard_holds(const SystemDef& sys, TransId t, const Labeling& by_var) {
  for (const auto& c : sys.trans(t).guard) {
    Value v = by_var[c.var];
    bool ok = false;
    switch (c.op) {
      case CmpOp::Eq: ok = v == c.k; break;
      case CmpOp::Ne: ok = v != c.k; break;
      case CmpOp::Lt: ok = v < c.k; break;
      case CmpOp::Gt: ok = v > c.k; break;
    }
    if (!ok) return false;
  }
  return true;
}

inline std::vector<TransId> oracle_enabled(const SystemDef& sys, const Labeling& by_var) {
  std::vector<TransId> r;
  for (TransId t = 0; t < sys.transitions.size(); ++t)
    if (oracle_guard_holds(sys, t, by_var)) r.push_back(t);
  return r;
}

// Unchecked firing on a full valuation; returns false on overflow.
inline bool oracle_fire(const SystemDef& sys, TransId t, Labeling& by_var) {
  Labeling pre = by_var;
  for (const auto& e : sys.trans(t).effects) {
    Value v = pre[e.var];
    switch (e.kind) {
      case EffectKind::Set: v = e.k; break;
      case EffectKind::Inc: v = v + 1; break;
      case EffectKind::Dec: v = v - 1; break;
    }
    if (v < sys.var(e.var).lo || v > sys.var(e.var).hi) return false;
    by_var[e.var] = v;
  }
  return true;
}

// Plain BFS over full valuations: the whole reachable set, independent of the
// search engines' interning or stack discipline. Fail states are not
// expanded.
struct OracleGraph {
  std::vector<Labeling> states;
  std::map<Labeling, size_t> index;
  std::vector<std::vector<std::pair<TransId, size_t>>> out;
  std::vector<bool> fail;
};

inline bool oracle_fail_state(const SystemDef& sys, const Labeling& by_var) {
  for (const auto& p : sys.processes)
    if (p.fail_when && bool_expr_holds(*p.fail_when, by_var)) return true;
  return false;
}

inline OracleGraph oracle_reach(const SystemDef& sys, size_t max_states = 1 << 22) {
  OracleGraph g;
  Labeling init = initial_global_labeling(sys);
  g.states.push_back(init);
  g.index[init] = 0;
  g.out.emplace_back();
  g.fail.push_back(oracle_fail_state(sys, init));
  for (size_t i = 0; i < g.states.size(); ++i) {
    if (g.fail[i]) continue;
    for (TransId t : oracle_enabled(sys, g.states[i])) {
      Labeling next = g.states[i];
      if (!oracle_fire(sys, t, next)) throw Error(ErrorKind::Internal, "oracle overflow");
      auto it = g.index.find(next);
      size_t j;
      if (it == g.index.end()) {
        j = g.states.size();
        if (j >= max_states) throw Error(ErrorKind::Internal, "oracle state budget");
        g.states.push_back(next);
        g.index[next] = j;
        g.out.emplace_back();
        g.fail.push_back(oracle_fail_state(sys, next));
      } else {
        j = it->second;
      }
      g.out[i].emplace_back(t, j);
    }
  }
  return g;
}

// Exact dependence under the independence definition, checked at every
// reachable state of the full graph: a pair is dependent iff some state
// witnesses disabling (one enabled pair member's firing disables the other)
// or differing firing orders.
inline std::set<std::pair<TransId, TransId>> oracle_exact_dependence(const SystemDef& sys,
                                                                     const OracleGraph& g) {
  std::set<std::pair<TransId, TransId>> dep;
  size_t n = sys.transitions.size();
  for (size_t i = 0; i < g.states.size(); ++i) {
    if (g.fail[i]) continue;
    auto en = oracle_enabled(sys, g.states[i]);
    for (size_t a = 0; a < en.size(); ++a) {
      for (size_t b = a + 1; b < en.size(); ++b) {
        TransId t1 = en[a], t2 = en[b];
        if (dep.count({t1, t2})) continue;
        Labeling s1 = g.states[i], s2 = g.states[i];
        bool viol = false;
        if (!oracle_fire(sys, t1, s1) || !oracle_fire(sys, t2, s2)) viol = true;
        if (!viol && (!oracle_guard_holds(sys, t2, s1) || !oracle_guard_holds(sys, t1, s2)))
          viol = true;  // disabling
        if (!viol) {
          Labeling o12 = s2, o21 = s1;  // t1 after t2, t2 after t1
          if (!oracle_fire(sys, t1, o12) || !oracle_fire(sys, t2, o21))
            viol = true;
          else
            viol = o12 != o21;
        }
        if (viol) {
          dep.insert({t1, t2});
          dep.insert({t2, t1});
        }
      }
    }
  }
  (void)n;
  return dep;
}

// Projection of a full valuation onto a process's visible variables.
inline Labeling project_onto(const SystemDef& sys, ProcId p, const Labeling& by_var) {
  Labeling l;
  for (VarId v : sys.processes[p].visible) l.push_back(by_var[v]);
  return l;
}

}  // namespace porlock::testing
