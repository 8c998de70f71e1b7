#pragma once

// Internal substrate shared by the monolithic and reduced search engines:
// per-process labeling slots, successor computation, safety evaluation.

#include <algorithm>

#include "porlock/model.hpp"

namespace porlock::detail {

struct ProcScope {
  std::vector<VarId> vis;        // sorted visible vars
  std::vector<int32_t> slot_of;  // VarId -> slot or -1
  Labeling initial;
};

struct SystemScopes {
  std::vector<ProcScope> procs;
  // For every variable, the processes whose labelings contain it.
  std::vector<std::vector<ProcId>> seen_by;
  // Representative (proc, slot) per variable for reading full valuations;
  // proc == -1 for variables visible to no process (constant at init).
  std::vector<std::pair<int32_t, int32_t>> rep;

  explicit SystemScopes(const SystemDef& sys) {
    procs.resize(sys.processes.size());
    seen_by.resize(sys.vars.size());
    rep.assign(sys.vars.size(), {-1, -1});
    for (ProcId p = 0; p < sys.processes.size(); ++p) {
      auto& sc = procs[p];
      sc.vis = sys.processes[p].visible;
      sc.slot_of.assign(sys.vars.size(), -1);
      for (size_t i = 0; i < sc.vis.size(); ++i) {
        sc.slot_of[sc.vis[i]] = static_cast<int32_t>(i);
        seen_by[sc.vis[i]].push_back(p);
        if (rep[sc.vis[i]].first < 0)
          rep[sc.vis[i]] = {static_cast<int32_t>(p), static_cast<int32_t>(i)};
      }
      sc.initial.resize(sc.vis.size());
      for (size_t i = 0; i < sc.vis.size(); ++i) sc.initial[i] = sys.var(sc.vis[i]).init;
    }
  }

  // Reconstructs the full valuation (indexed by VarId) of a global state given
  // per-process labelings.
  Labeling full_valuation(const SystemDef& sys,
                          const std::vector<const Labeling*>& local_labels) const {
    Labeling full(sys.vars.size());
    for (VarId v = 0; v < sys.vars.size(); ++v) {
      auto [p, slot] = rep[v];
      full[v] = p < 0 ? sys.var(v).init : (*local_labels[p])[slot];
    }
    return full;
  }
};

// One changed variable of a firing.
struct VarChange {
  VarId var;
  Value value;
};

// Applies a transition's effects to its owner's labeling, collecting actual
// changes. Throws on domain overflow.
inline std::vector<VarChange> changes_of(const SystemDef& sys, const ProcScope& owner_scope,
                                         const Labeling& owner_label, const TransitionDef& tr) {
  std::vector<VarChange> changed;
  for (const auto& e : tr.effects) {
    int32_t slot = owner_scope.slot_of[e.var];
    Value v = owner_label[slot];
    switch (e.kind) {
      case EffectKind::Set: v = e.k; break;
      case EffectKind::Inc: v = v + 1; break;
      case EffectKind::Dec: v = v - 1; break;
    }
    const VariableDecl& d = sys.var(e.var);
    if (v < d.lo || v > d.hi)
      throw Error(ErrorKind::DomainOverflow,
                  "transition '" + tr.id + "' drives variable '" + d.name + "' to " +
                      std::to_string(v) + ", outside " + std::to_string(d.lo) + ".." +
                      std::to_string(d.hi));
    if (v != owner_label[slot]) changed.push_back(VarChange{e.var, v});
  }
  return changed;
}

inline bool guard_holds_scoped(const ProcScope& sc, const std::vector<Cmp>& guard,
                               const Labeling& label) {
  for (const auto& c : guard)
    if (!cmp_holds(c, label[sc.slot_of[c.var]])) return false;
  return true;
}

inline bool expr_holds_by_var(const BoolExpr& e, const Labeling& by_var) {
  return bool_expr_holds(e, by_var);
}

}  // namespace porlock::detail
