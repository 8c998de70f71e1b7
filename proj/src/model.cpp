#include "porlock/model.hpp"

#include <algorithm>
#include <unordered_set>

namespace porlock {

std::optional<VarId> SystemDef::find_var(const std::string& name) const {
  for (VarId i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return i;
  return std::nullopt;
}

std::optional<TransId> SystemDef::find_trans(const std::string& id) const {
  for (TransId i = 0; i < transitions.size(); ++i)
    if (transitions[i].id == id) return i;
  return std::nullopt;
}

std::pair<StateId, bool> StateGraph::intern(const Labeling& l, bool is_fail) {
  auto it = index.find(l);
  if (it != index.end()) return {it->second, false};
  StateId id = static_cast<StateId>(labels.size());
  labels.push_back(l);
  fail.push_back(is_fail ? 1 : 0);
  out.emplace_back();
  enabled_cache.emplace_back();
  index.emplace(l, id);
  return {id, true};
}

bool StateGraph::has_edge(StateId src, int32_t tid, StateId dst) const {
  for (const auto& e : out[src])
    if (e.tid == tid && e.dst == dst) return true;
  return false;
}

bool StateGraph::add_edge(StateId src, int32_t tid, StateId dst, char clause) {
  if (has_edge(src, tid, dst)) return false;
  out[src].push_back(OutEdge{tid, dst, clause});
  return true;
}

bool guard_holds_global(const std::vector<Cmp>& guard, const Labeling& by_var) {
  for (const auto& c : guard)
    if (!cmp_holds(c, by_var[c.var])) return false;
  return true;
}

bool guard_holds(const StateGraph& g, const std::vector<Cmp>& guard, const Labeling& label) {
  for (const auto& c : guard) {
    int32_t s = g.slot_of[c.var];
    if (s < 0) throw Error(ErrorKind::Internal, "guard references variable outside state graph scope");
    if (!cmp_holds(c, label[s])) return false;
  }
  return true;
}

bool guard_holds_restricted(const StateGraph& g, const std::vector<Cmp>& guard, const Labeling& label) {
  for (const auto& c : guard) {
    int32_t s = g.slot_of[c.var];
    if (s < 0) continue;
    if (!cmp_holds(c, label[s])) return false;
  }
  return true;
}

bool bool_expr_holds(const BoolExpr& e, const std::vector<Value>& by_var) {
  switch (e.kind) {
    case BoolExpr::Kind::Cmp: return cmp_holds(e.cmp, by_var[e.cmp.var]);
    case BoolExpr::Kind::And:
      for (const auto& c : e.children)
        if (!bool_expr_holds(c, by_var)) return false;
      return true;
    case BoolExpr::Kind::Or:
      for (const auto& c : e.children)
        if (bool_expr_holds(c, by_var)) return true;
      return false;
  }
  return false;
}

bool bool_expr_holds_sg(const StateGraph& g, const BoolExpr& e, const Labeling& label) {
  switch (e.kind) {
    case BoolExpr::Kind::Cmp: {
      int32_t s = g.slot_of[e.cmp.var];
      if (s < 0) throw Error(ErrorKind::Internal, "predicate references variable outside state graph scope");
      return cmp_holds(e.cmp, label[s]);
    }
    case BoolExpr::Kind::And:
      for (const auto& c : e.children)
        if (!bool_expr_holds_sg(g, c, label)) return false;
      return true;
    case BoolExpr::Kind::Or:
      for (const auto& c : e.children)
        if (bool_expr_holds_sg(g, c, label)) return true;
      return false;
  }
  return false;
}

std::vector<TransId> enabled(const SystemDef& sys, const Labeling& by_var,
                             const std::vector<TransId>& candidates) {
  std::vector<TransId> result;
  for (TransId t : candidates)
    if (guard_holds_global(sys.trans(t).guard, by_var)) result.push_back(t);
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<TransId> enabled(const SystemDef& sys, const Labeling& by_var) {
  std::vector<TransId> all(sys.transitions.size());
  for (TransId t = 0; t < all.size(); ++t) all[t] = t;
  return enabled(sys, by_var, all);
}

Labeling fire(const SystemDef& sys, TransId t, const Labeling& by_var) {
  const TransitionDef& tr = sys.trans(t);
  if (!guard_holds_global(tr.guard, by_var))
    throw Error(ErrorKind::ContractViolation,
                "fire: transition '" + tr.id + "' is not enabled");
  Labeling next = by_var;
  for (const auto& e : tr.effects) {
    Value v = by_var[e.var];  // read from the pre-state: simultaneous application
    switch (e.kind) {
      case EffectKind::Set: v = e.k; break;
      case EffectKind::Inc: v = v + 1; break;
      case EffectKind::Dec: v = v - 1; break;
    }
    const VariableDecl& d = sys.var(e.var);
    if (v < d.lo || v > d.hi)
      throw Error(ErrorKind::DomainOverflow,
                  "fire: effect of transition '" + tr.id + "' drives variable '" + d.name +
                      "' to " + std::to_string(v) + ", outside " + std::to_string(d.lo) +
                      ".." + std::to_string(d.hi));
    next[e.var] = v;
  }
  return next;
}

bool apply_effects_restricted(const SystemDef& sys, const StateGraph& g,
                              const std::vector<Effect>& effects, Labeling& label) {
  for (const auto& e : effects) {
    int32_t s = g.slot_of[e.var];
    if (s < 0) continue;
    Value v = label[s];
    switch (e.kind) {
      case EffectKind::Set: v = e.k; break;
      case EffectKind::Inc: v = v + 1; break;
      case EffectKind::Dec: v = v - 1; break;
    }
    const VariableDecl& d = sys.var(e.var);
    if (v < d.lo || v > d.hi) return false;
    label[s] = v;
  }
  return true;
}

namespace {

void collect_vars(const BoolExpr& e, std::vector<VarId>& into) {
  if (e.kind == BoolExpr::Kind::Cmp) {
    into.push_back(e.cmp.var);
    return;
  }
  for (const auto& c : e.children) collect_vars(c, into);
}

}  // namespace

void check_system(const SystemDef& sys) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Internal, "invalid system: " + m); };

  std::unordered_set<std::string> names;
  for (const auto& v : sys.vars) {
    if (!names.insert(v.name).second) fail("duplicate variable name " + v.name);
    if (v.lo > v.hi) fail("empty domain for " + v.name);
    if (v.init < v.lo || v.init > v.hi) fail("initial value of " + v.name + " outside domain");
    if (v.kind == VarKind::Local && v.owner >= sys.processes.size())
      fail("local variable " + v.name + " owned by unknown process");
  }

  std::unordered_set<std::string> tids;
  for (const auto& t : sys.transitions) {
    if (!tids.insert(t.id).second) fail("duplicate transition id " + t.id);
    if (t.owner >= sys.processes.size()) fail("transition " + t.id + " owned by unknown process");
  }
  for (TransId t = 1; t < sys.transitions.size(); ++t)
    if (!(sys.transitions[t - 1].id < sys.transitions[t].id))
      fail("transitions not sorted by id");

  for (ProcId p = 0; p < sys.processes.size(); ++p) {
    const auto& proc = sys.processes[p];
    auto visible = [&](VarId v) {
      return std::binary_search(proc.visible.begin(), proc.visible.end(), v);
    };
    for (VarId v : proc.locals) {
      if (sys.vars[v].kind != VarKind::Local || sys.vars[v].owner != p)
        fail("process " + proc.name + " lists foreign local");
      if (!visible(v)) fail("local of " + proc.name + " missing from visible set");
    }
    for (TransId t : proc.transitions) {
      const auto& tr = sys.transitions[t];
      if (tr.owner != p) fail("transition " + tr.id + " listed under wrong process");
      std::unordered_set<VarId> written;
      for (const auto& e : tr.effects) {
        if (!visible(e.var)) fail("transition " + tr.id + " writes invisible variable");
        if (!written.insert(e.var).second)
          fail("transition " + tr.id + " mentions a variable twice in effects");
      }
      for (const auto& c : tr.guard)
        if (!visible(c.var)) fail("transition " + tr.id + " reads invisible variable");
    }
    if (proc.fail_when) {
      std::vector<VarId> used;
      collect_vars(*proc.fail_when, used);
      for (VarId v : used)
        if (!visible(v)) fail("fail predicate of " + proc.name + " reads invisible variable");
    }
  }
}

Labeling initial_labeling(const SystemDef& sys, const StateGraph& g) {
  Labeling l(g.vars.size());
  for (size_t i = 0; i < g.vars.size(); ++i) l[i] = sys.var(g.vars[i]).init;
  return l;
}

Labeling initial_global_labeling(const SystemDef& sys) {
  Labeling l(sys.vars.size());
  for (VarId v = 0; v < sys.vars.size(); ++v) l[v] = sys.vars[v].init;
  return l;
}

}  // namespace porlock
