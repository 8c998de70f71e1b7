#include "porlock/cra.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace porlock {

namespace {

bool eval_fail(const SystemDef& sys, const StateGraph& g, ProcId p, const Labeling& l) {
  const auto& fw = sys.processes[p].fail_when;
  return fw && bool_expr_holds_sg(g, *fw, l);
}

}  // namespace

StateGraph init_local_sg(const SystemDef& sys, ProcId p) {
  StateGraph g;
  g.owner = static_cast<int>(p);
  g.owner_name = sys.processes[p].name;
  g.vars = sys.processes[p].visible;
  g.slot_of.assign(sys.vars.size(), -1);
  for (size_t i = 0; i < g.vars.size(); ++i) g.slot_of[g.vars[i]] = static_cast<int32_t>(i);
  Labeling init = initial_labeling(sys, g);
  g.intern(init, eval_fail(sys, g, p, init));
  g.initial = 0;
  g.enabled_cache[0] = {};  // filled by closure
  return g;
}

bool local_closure(const SystemDef& sys, StateGraph& g, ProcId p) {
  bool changed = false;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.fail[s]) {
      g.enabled_cache[s].clear();
      continue;
    }
    std::vector<TransId> en;
    for (TransId t : sys.processes[p].transitions)
      if (guard_holds(g, sys.trans(t).guard, g.labels[s])) en.push_back(t);
    std::sort(en.begin(), en.end());
    g.enabled_cache[s] = en;
    for (TransId t : en) {
      Labeling next = g.labels[s];
      if (!apply_effects_restricted(sys, g, sys.trans(t).effects, next))
        throw Error(ErrorKind::DomainOverflow,
                    "local closure: transition '" + sys.trans(t).id + "' overflows a domain");
      auto [dst, fresh] = g.intern(next, eval_fail(sys, g, p, next));
      changed |= fresh;
      changed |= g.add_edge(s, static_cast<int32_t>(t), dst);
    }
  }
  return changed;
}

std::vector<Constraint> extract_constraints(const SystemDef& sys, const StateGraph& g, ProcId p,
                                            const std::vector<std::pair<StateId, OutEdge>>& edges) {
  std::vector<Constraint> out;
  for (const auto& [src, e] : edges) {
    // Shared variables whose value changes across the edge.
    std::vector<Proposition> before, after;
    for (size_t slot = 0; slot < g.vars.size(); ++slot) {
      VarId v = g.vars[slot];
      if (sys.var(v).kind != VarKind::Shared) continue;
      Value a = g.labels[src][slot];
      Value b = g.labels[e.dst][slot];
      if (a == b) continue;
      before.push_back(Proposition{v, a});
      after.push_back(Proposition{v, b});
    }
    if (before.empty()) continue;
    for (ProcId q = 0; q < sys.processes.size(); ++q) {
      if (q == p) continue;
      const auto& vis = sys.processes[q].visible;
      Constraint c;
      c.source = p;
      c.target = q;
      for (size_t i = 0; i < before.size(); ++i) {
        if (!std::binary_search(vis.begin(), vis.end(), before[i].var)) continue;
        c.x.push_back(before[i]);
        c.y.push_back(after[i]);
      }
      if (c.x.empty()) continue;
      bool dup = false;
      for (const auto& prev : out)
        if (prev.target == c.target && prev.same_rewrite(c)) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(std::move(c));
    }
  }
  return out;
}

size_t apply_constraint(const SystemDef& sys, StateGraph& g, const Constraint& c) {
  size_t added = 0;
  ProcId p = static_cast<ProcId>(g.owner);
  // Snapshot: states produced by this very application are rewritten on the
  // next sweep (the fixpoint loop reapplies until closed).
  size_t upto = g.num_states();
  for (StateId s = 0; s < upto; ++s) {
    if (g.fail[s]) continue;  // no moves out of fail states
    bool match = true;
    for (const auto& pr : c.x) {
      int32_t slot = g.slot_of[pr.var];
      if (slot < 0 || g.labels[s][slot] != pr.value) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    Labeling next = g.labels[s];
    for (const auto& pr : c.y) next[g.slot_of[pr.var]] = pr.value;
    auto [dst, fresh] = g.intern(next, eval_fail(sys, g, p, next));
    if (fresh) ++added;
    if (g.add_edge(s, kEnvEdge, dst)) ++added;
  }
  return added;
}

CraResult build_local_sgs(const SystemDef& sys, const CraOptions& options) {
  CraResult result;
  const size_t nproc = sys.processes.size();
  for (ProcId p = 0; p < nproc; ++p) result.sgs.push_back(init_local_sg(sys, p));

  std::vector<ProcId> schedule(nproc);
  for (ProcId p = 0; p < nproc; ++p) schedule[p] = p;
  if (options.reverse_schedule) std::reverse(schedule.begin(), schedule.end());

  // Per-process store of received constraints; reapplied every round so that
  // states discovered later still get their environment successors.
  std::vector<std::vector<Constraint>> store(nproc);
  // High-water mark of edges already mined for constraints, per process and
  // state (edges are appended, never removed).
  std::vector<std::vector<size_t>> mined(nproc);

  int iteration = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++iteration;
    assert(iteration < 1 << 20);

    // Task 1: local reachability closure for every process.
    for (ProcId p : schedule) changed |= local_closure(sys, result.sgs[p], p);

    // Task 2: extract constraints from freshly found shared-changing edges.
    for (ProcId p : schedule) {
      StateGraph& g = result.sgs[p];
      std::vector<std::pair<StateId, OutEdge>> fresh;
      mined[p].resize(g.num_states(), 0);
      for (StateId s = 0; s < g.num_states(); ++s) {
        for (size_t i = mined[p][s]; i < g.out[s].size(); ++i)
          if (g.out[s][i].tid != kEnvEdge) fresh.emplace_back(s, g.out[s][i]);
        mined[p][s] = g.out[s].size();
      }
      for (Constraint& c : extract_constraints(sys, g, p, fresh)) {
        bool dup = false;
        for (const auto& prev : store[c.target])
          if (prev.same_rewrite(c)) {
            dup = true;
            break;
          }
        if (dup) continue;
        result.log.push_back(LoggedConstraint{iteration, c});
        store[c.target].push_back(std::move(c));
        changed = true;
      }
    }

    // Apply every stored constraint; new matches may have appeared through
    // closure or earlier applications.
    for (ProcId p : schedule)
      for (const Constraint& c : store[p])
        if (apply_constraint(sys, result.sgs[p], c) > 0) changed = true;

    if (options.on_iteration) options.on_iteration(iteration, result.sgs);
  }
  result.iterations = iteration;
  return result;
}

}  // namespace porlock
