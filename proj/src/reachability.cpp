#include "porlock/reachability.hpp"

#include <chrono>

#include "engine_common.hpp"

namespace porlock {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Deadlock: return "deadlock";
    case Verdict::SafetyViolation: return "safety-violation";
    case Verdict::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

double SearchStats::ample_avg() const {
  uint64_t n = 0, sum = 0;
  for (const auto& [size, count] : ample_hist) {
    n += count;
    sum += size * count;
  }
  return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n);
}

namespace {

using detail::ProcScope;
using detail::SystemScopes;

class MonoSearch {
 public:
  MonoSearch(const SystemDef& sys, const SearchOptions& opt)
      : sys_(sys), opt_(opt), scopes_(sys) {}

  SearchResult run() {
    auto t0 = std::chrono::steady_clock::now();
    SearchResult result;
    SearchStats& st = result.stats;

    // Per-process interning of local labelings.
    std::vector<std::vector<Labeling>> labels(nproc());
    std::vector<std::unordered_map<Labeling, StateId, LabelingHash>> index(nproc());
    std::vector<std::vector<uint8_t>> fail(nproc());
    std::vector<std::vector<std::vector<TransId>>> en(nproc());

    auto intern_local = [&](ProcId p, const Labeling& l) -> StateId {
      auto it = index[p].find(l);
      if (it != index[p].end()) return it->second;
      StateId id = static_cast<StateId>(labels[p].size());
      labels[p].push_back(l);
      index[p].emplace(l, id);
      bool f = sys_.processes[p].fail_when &&
               bool_expr_holds_local(p, *sys_.processes[p].fail_when, l);
      fail[p].push_back(f ? 1 : 0);
      std::vector<TransId> e;
      for (TransId t : sys_.processes[p].transitions)
        if (detail::guard_holds_scoped(scopes_.procs[p], sys_.trans(t).guard, l)) e.push_back(t);
      std::sort(e.begin(), e.end());
      en[p].push_back(std::move(e));
      return id;
    };

    // Global states keyed by the tuple of per-process local state ids.
    struct KeyHash {
      size_t operator()(const std::vector<StateId>& k) const {
        uint64_t h = 1469598103934665603ull;
        for (StateId s : k) {
          h ^= s;
          h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
      }
    };
    std::vector<std::vector<StateId>> states;
    std::unordered_map<std::vector<StateId>, StateId, KeyHash> table;

    auto global_fail = [&](const std::vector<StateId>& key) {
      for (ProcId p = 0; p < nproc(); ++p)
        if (fail[p][key[p]]) return true;
      return false;
    };
    auto global_enabled = [&](const std::vector<StateId>& key) {
      std::vector<TransId> all;
      for (ProcId p = 0; p < nproc(); ++p)
        all.insert(all.end(), en[p][key[p]].begin(), en[p][key[p]].end());
      std::sort(all.begin(), all.end());
      return all;
    };
    auto violates_safety = [&](const std::vector<StateId>& key) {
      if (!sys_.safety) return false;
      std::vector<const Labeling*> ls(nproc());
      for (ProcId p = 0; p < nproc(); ++p) ls[p] = &labels[p][key[p]];
      Labeling full = scopes_.full_valuation(sys_, ls);
      return !bool_expr_holds(*sys_.safety, full);
    };

    struct Frame {
      StateId state;
      TransId entered_via;  // undefined for the bottom frame
      std::vector<TransId> todo;
      size_t idx = 0;
    };
    std::vector<Frame> stack;

    auto current_path = [&](TransId last) {
      std::vector<TransId> path;
      for (size_t i = 1; i < stack.size(); ++i) path.push_back(stack[i].entered_via);
      path.push_back(last);
      return path;
    };

    bool stop = false;
    // Interns a global state; performs violation checks on first visit.
    // entered==nullptr marks the initial state.
    auto visit = [&](std::vector<StateId> key, const TransId* entered) -> std::optional<StateId> {
      auto it = table.find(key);
      if (it != table.end()) return it->second;
      if (states.size() >= opt_.max_states) {
        st.budget_exceeded = true;
        stop = true;
        return std::nullopt;
      }
      StateId id = static_cast<StateId>(states.size());
      states.push_back(key);
      table.emplace(states.back(), id);
      bool is_fail = global_fail(key);
      std::vector<TransId> e = is_fail ? std::vector<TransId>{} : global_enabled(key);
      if (violates_safety(key) && !st.safety_found) {
        st.safety_found = true;
        st.safety_witness = entered ? current_path(*entered) : std::vector<TransId>{};
        if (opt_.stop_on_first) stop = true;
      }
      if (!is_fail && e.empty() && !st.deadlock_found) {
        st.deadlock_found = true;
        st.deadlock_witness = entered ? current_path(*entered) : std::vector<TransId>{};
        if (opt_.stop_on_first) stop = true;
      }
      if (opt_.reverse_order) std::reverse(e.begin(), e.end());
      Frame f;
      f.state = id;
      f.entered_via = entered ? *entered : 0;
      f.todo = std::move(e);
      stack.push_back(std::move(f));
      st.peak_depth = std::max<uint32_t>(st.peak_depth, static_cast<uint32_t>(stack.size()));
      return id;
    };

    std::vector<StateId> init_key(nproc());
    for (ProcId p = 0; p < nproc(); ++p) init_key[p] = intern_local(p, scopes_.procs[p].initial);
    visit(init_key, nullptr);

    struct EdgeRec {
      StateId src;
      TransId tid;
      StateId dst;
    };
    std::vector<EdgeRec> edges;

    while (!stack.empty() && !stop) {
      Frame& f = stack.back();
      if (f.idx >= f.todo.size()) {
        stack.pop_back();
        continue;
      }
      TransId t = f.todo[f.idx++];
      StateId src = f.state;

      // Fire t: update the owner's labeling, then every process that sees a
      // changed variable.
      const TransitionDef& tr = sys_.trans(t);
      std::vector<StateId> key = states[src];
      auto changed =
          detail::changes_of(sys_, scopes_.procs[tr.owner], labels[tr.owner][key[tr.owner]], tr);
      std::vector<ProcId> affected;
      for (const auto& ch : changed)
        for (ProcId q : scopes_.seen_by[ch.var]) affected.push_back(q);
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      for (ProcId q : affected) {
        Labeling l = labels[q][key[q]];
        for (const auto& ch : changed) {
          int32_t slot = scopes_.procs[q].slot_of[ch.var];
          if (slot >= 0) l[slot] = ch.value;
        }
        key[q] = intern_local(q, l);
      }

      st.edges++;
      auto dst = visit(std::move(key), &t);
      if (dst && opt_.build_graph) edges.push_back(EdgeRec{src, t, *dst});
    }

    st.states = states.size();
    if (st.safety_found)
      st.verdict = Verdict::SafetyViolation;
    else if (st.deadlock_found)
      st.verdict = Verdict::Deadlock;
    else if (st.budget_exceeded)
      st.verdict = Verdict::BudgetExceeded;
    else
      st.verdict = Verdict::Ok;

    if (opt_.build_graph && !st.budget_exceeded) {
      StateGraph& g = result.graph;
      g.owner_name = "composite";
      g.owner = -1;
      g.vars.resize(sys_.vars.size());
      for (VarId v = 0; v < sys_.vars.size(); ++v) g.vars[v] = v;
      g.slot_of.resize(sys_.vars.size());
      for (VarId v = 0; v < sys_.vars.size(); ++v) g.slot_of[v] = static_cast<int32_t>(v);
      for (const auto& key : states) {
        std::vector<const Labeling*> ls(nproc());
        for (ProcId p = 0; p < nproc(); ++p) ls[p] = &labels[p][key[p]];
        g.intern(scopes_.full_valuation(sys_, ls), global_fail(key));
      }
      g.initial = 0;
      for (const auto& e : edges) g.add_edge(e.src, static_cast<int32_t>(e.tid), e.dst);
    }

    st.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

 private:
  ProcId nproc() const { return static_cast<ProcId>(sys_.processes.size()); }

  bool bool_expr_holds_local(ProcId p, const BoolExpr& e, const Labeling& l) const {
    switch (e.kind) {
      case BoolExpr::Kind::Cmp:
        return cmp_holds(e.cmp, l[scopes_.procs[p].slot_of[e.cmp.var]]);
      case BoolExpr::Kind::And:
        for (const auto& c : e.children)
          if (!bool_expr_holds_local(p, c, l)) return false;
        return true;
      case BoolExpr::Kind::Or:
        for (const auto& c : e.children)
          if (bool_expr_holds_local(p, c, l)) return true;
        return false;
    }
    return false;
  }

  const SystemDef& sys_;
  const SearchOptions& opt_;
  SystemScopes scopes_;
};

}  // namespace

SearchResult explore_full(const SystemDef& sys, const SearchOptions& options) {
  return MonoSearch(sys, options).run();
}

std::vector<Labeling> replay(const SystemDef& sys, const std::vector<TransId>& path) {
  std::vector<Labeling> visited;
  Labeling cur = initial_global_labeling(sys);
  visited.push_back(cur);
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= sys.transitions.size())
      throw Error(ErrorKind::InvalidWitness,
                  "replay: unknown transition at step " + std::to_string(i));
    const auto& tr = sys.trans(path[i]);
    if (!guard_holds_global(tr.guard, cur))
      throw Error(ErrorKind::InvalidWitness, "replay: transition '" + tr.id +
                                                 "' is not enabled at step " + std::to_string(i));
    cur = fire(sys, path[i], cur);
    visited.push_back(cur);
  }
  return visited;
}

}  // namespace porlock
