#include "porlock/dependence.hpp"

#include <algorithm>
#include <deque>

namespace porlock {

namespace {

std::vector<VarId> guard_vars(const TransitionDef& t) {
  std::vector<VarId> vs;
  for (const auto& c : t.guard) vs.push_back(c.var);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::vector<VarId> write_vars(const TransitionDef& t) {
  std::vector<VarId> vs;
  for (const auto& e : t.effects) vs.push_back(e.var);
  std::sort(vs.begin(), vs.end());
  return vs;
}

bool intersects_scope(const std::vector<VarId>& a, const std::vector<VarId>& b,
                      const StateGraph& g) {
  for (VarId va : a)
    for (VarId vb : b)
      if (va == vb && g.slot_of[va] >= 0) return true;
  return false;
}

// Can t1 and t2 interfere inside g's variable scope? Requires a write of one
// to touch a guard or write of the other, on a variable g can see.
bool may_interact(const StateGraph& g, const TransitionDef& t1, const TransitionDef& t2) {
  auto w1 = write_vars(t1), w2 = write_vars(t2);
  auto g1 = guard_vars(t1), g2 = guard_vars(t2);
  return intersects_scope(w1, g2, g) || intersects_scope(w1, w2, g) ||
         intersects_scope(w2, g1, g);
}

// Restricted firing: effects on in-scope variables only. Returns false on
// domain overflow (treated as a dependence witness by callers).
bool fire_restricted(const SystemDef& sys, const StateGraph& g, const TransitionDef& t,
                     Labeling& label) {
  return apply_effects_restricted(sys, g, t.effects, label);
}

// One local state's worth of Definition-2 violation checks for an ordered
// pair: firing t1 disables t2, or the two firing orders disagree.
bool witnesses_violation(const SystemDef& sys, const StateGraph& g, const Labeling& l,
                         const TransitionDef& t1, const TransitionDef& t2) {
  if (!guard_holds_restricted(g, t1.guard, l) || !guard_holds_restricted(g, t2.guard, l))
    return false;
  // Disabling: t2 enabled before, disabled after t1.
  Labeling after1 = l;
  if (!fire_restricted(sys, g, t1, after1)) return true;  // overflow: conservative
  if (!guard_holds_restricted(g, t2.guard, after1)) return true;
  // Commutation: t1(t2(s)) vs t2(t1(s)) as labelings.
  Labeling order12 = after1;
  if (!fire_restricted(sys, g, t2, order12)) return true;
  Labeling order21 = l;
  if (!fire_restricted(sys, g, t2, order21)) return true;
  if (!fire_restricted(sys, g, t1, order21)) return true;
  return order12 != order21;
}

}  // namespace

std::vector<TidSet> extract_dependence(const SystemDef& sys, const std::vector<StateGraph>& sgs) {
  const size_t n = sys.transitions.size();
  std::vector<TidSet> d(n, TidSet(n));

  for (TransId a = 0; a < n; ++a) {
    for (TransId b = a + 1; b < n; ++b) {
      const auto& ta = sys.trans(a);
      const auto& tb = sys.trans(b);
      // Hosts: the owners' SGs. A dependence between these two can only be
      // exercised through variables both owners see, so the owner SGs
      // witness every real violation.
      std::vector<ProcId> hosts{ta.owner};
      if (tb.owner != ta.owner) hosts.push_back(tb.owner);
      bool dep = false;
      for (ProcId h : hosts) {
        const StateGraph& g = sgs[h];
        if (!may_interact(g, ta, tb)) continue;
        for (StateId s = 0; s < g.num_states() && !dep; ++s) {
          if (g.fail[s]) continue;  // nothing fires from fail states
          dep = witnesses_violation(sys, g, g.labels[s], ta, tb) ||
                witnesses_violation(sys, g, g.labels[s], tb, ta);
        }
        if (dep) break;
      }
      if (dep) {
        d[a].set(b);
        d[b].set(a);
      }
    }
  }
  return d;
}

std::unordered_map<uint64_t, TidSet> build_conditional_deps(const SystemDef& sys,
                                                            const std::vector<StateGraph>& sgs,
                                                            const std::vector<TidSet>& d) {
  const size_t n = sys.transitions.size();
  std::unordered_map<uint64_t, TidSet> dc;

  // Predecessor adjacency per SG (environment edges included).
  std::vector<std::vector<std::vector<StateId>>> preds(sgs.size());
  for (size_t p = 0; p < sgs.size(); ++p) {
    preds[p].resize(sgs[p].num_states());
    for (StateId s = 0; s < sgs[p].num_states(); ++s)
      for (const auto& e : sgs[p].out[s]) preds[p][e.dst].push_back(s);
  }

  auto record = [&](ProcId p, StateId s, TransId t) {
    auto [it, fresh] = dc.try_emplace(DependenceOracle::dc_key(p, s), TidSet(n));
    it->second.set(t);
  };

  // For the pair (a, b), entries for `a` are collected from the walk over the
  // partner's owner SG: the partner's guard is exact there, so the seed set
  // is tight in the dimension that decides whether the dependency can still
  // wake up. The witness chain exists in every component SG, so one sound
  // host per recorded member suffices.
  auto walk = [&](ProcId h, const TransitionDef& ta, const TransitionDef& tb, TransId a,
                  TransId b, bool rec_a, bool rec_b) {
    const StateGraph& g = sgs[h];
    // Seeds: states where the dependency holds (both enabled there). Seeds
    // are recorded as well: under restricted enabledness a seed's matching
    // global state may still have one side disabled.
    std::vector<uint8_t> seen(g.num_states(), 0);
    std::deque<StateId> work;
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (g.fail[s]) continue;
      if (guard_holds_restricted(g, ta.guard, g.labels[s]) &&
          guard_holds_restricted(g, tb.guard, g.labels[s])) {
        seen[s] = 1;
        if (rec_a) record(h, s, a);
        if (rec_b) record(h, s, b);
        work.push_back(s);
      }
    }
    // Backward: predecessors where either transition is enabled are recorded
    // and walked further; others are dropped.
    while (!work.empty()) {
      StateId s = work.front();
      work.pop_front();
      for (StateId q : preds[h][s]) {
        if (seen[q]) continue;
        seen[q] = 1;
        bool ea = guard_holds_restricted(g, ta.guard, g.labels[q]);
        bool eb = guard_holds_restricted(g, tb.guard, g.labels[q]);
        if (!ea && !eb) continue;
        if (ea && rec_a) record(h, q, a);
        if (eb && rec_b) record(h, q, b);
        work.push_back(q);
      }
    }
  };

  for (TransId a = 0; a < n; ++a) {
    for (TransId b = a + 1; b < n; ++b) {
      if (!d[a].test(b)) continue;
      const auto& ta = sys.trans(a);
      const auto& tb = sys.trans(b);
      if (ta.owner == tb.owner) {
        walk(ta.owner, ta, tb, a, b, true, true);
      } else {
        walk(tb.owner, ta, tb, a, b, true, false);
        walk(ta.owner, ta, tb, a, b, false, true);
      }
    }
  }
  return dc;
}

TidSet visible_transitions(const SystemDef& sys) {
  TidSet vis(sys.transitions.size());
  if (!sys.safety) return vis;
  std::vector<uint8_t> in_pred(sys.vars.size(), 0);
  std::vector<const BoolExpr*> stack{&*sys.safety};
  while (!stack.empty()) {
    const BoolExpr* e = stack.back();
    stack.pop_back();
    if (e->kind == BoolExpr::Kind::Cmp)
      in_pred[e->cmp.var] = 1;
    else
      for (const auto& c : e->children) stack.push_back(&c);
  }
  for (TransId t = 0; t < sys.transitions.size(); ++t)
    for (const auto& eff : sys.trans(t).effects)
      if (in_pred[eff.var]) vis.set(t);
  return vis;
}

DependenceOracle build_oracle(const SystemDef& sys, const std::vector<StateGraph>& sgs) {
  DependenceOracle o;
  o.n_trans = sys.transitions.size();
  o.d = extract_dependence(sys, sgs);
  o.d_cond = build_conditional_deps(sys, sgs, o.d);
  o.visible = visible_transitions(sys);
  return o;
}

}  // namespace porlock
