#include "porlock/por.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "engine_common.hpp"

namespace porlock {

namespace {

// Condition 2 exclusion: some dependence partner of t is not enabled here.
// Condition 2' keeps the exclusion only while a conditional dependency for t
// is pending at one of the state's local components.
bool excluded(const AmpleContext& ctx, TransId t) {
  const auto& d = ctx.oracle->d[t];
  if (!d.any_outside(ctx.enabled_bits)) return false;
  if (ctx.mode == PorMode::Cond2) return true;
  return ctx.dc_hits.test(t);
}

}  // namespace

AmpleSet compute_ample(const AmpleContext& ctx) {
  AmpleSet result;
  if (ctx.enabled.empty()) return result;  // C0

  auto finish = [&](std::vector<TransId> chosen) {
    bool proper = chosen.size() < ctx.enabled.size();
    if (proper) {
      // C2: a proper ample set must be invisible.
      for (TransId t : chosen)
        if (ctx.oracle->visible.test(t)) {
          proper = false;
          break;
        }
    }
    if (proper && ctx.use_proviso && ctx.successor_on_stack) {
      // Weak proviso: keep the reduction only if some member does not close
      // a cycle.
      bool breaks_cycle = false;
      for (TransId t : chosen)
        if (!ctx.successor_on_stack(t)) {
          breaks_cycle = true;
          break;
        }
      if (!breaks_cycle) proper = false;
    }
    if (!proper) {
      result.transitions = ctx.enabled;
      result.fully_expanded = true;
    } else {
      result.transitions = std::move(chosen);
    }
    return result;
  };

  // Step 1: transitions independent of every other enabled transition and
  // free of (mode-adjusted) disabled-partner obligations; pick the lowest id.
  for (TransId t : ctx.enabled) {
    if (excluded(ctx, t)) continue;
    TidSet others = ctx.enabled_bits;
    others.clear(t);
    if (ctx.oracle->d[t].intersects(others)) continue;
    return finish({t});
  }

  // Step 2: dependence-closed classes among the enabled transitions; a class
  // qualifies when no member carries an exclusion. Smallest class wins, ties
  // by lexicographic member ids.
  {
    std::vector<TransId> klass(ctx.enabled.size());
    std::iota(klass.begin(), klass.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t i) {
      while (klass[i] != i) i = klass[i] = klass[klass[i]];
      return i;
    };
    for (size_t i = 0; i < ctx.enabled.size(); ++i)
      for (size_t j = i + 1; j < ctx.enabled.size(); ++j)
        if (ctx.oracle->dependent(ctx.enabled[i], ctx.enabled[j])) klass[find(i)] = find(j);

    std::vector<std::vector<TransId>> classes(ctx.enabled.size());
    for (size_t i = 0; i < ctx.enabled.size(); ++i)
      classes[find(i)].push_back(ctx.enabled[i]);

    std::vector<TransId> best;
    for (auto& c : classes) {
      if (c.empty() || c.size() == ctx.enabled.size()) continue;
      bool ok = true;
      for (TransId t : c)
        if (excluded(ctx, t)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (best.empty() || c.size() < best.size() || (c.size() == best.size() && c < best))
        best = std::move(c);
    }
    if (!best.empty()) return finish(std::move(best));
  }

  // Step 3: full expansion.
  result.transitions = ctx.enabled;
  result.fully_expanded = true;
  return result;
}

namespace {

using detail::SystemScopes;

class PorSearch {
 public:
  PorSearch(const SystemDef& sys, const std::vector<StateGraph>& sgs,
            const DependenceOracle& oracle, const PorOptions& opt)
      : sys_(sys), sgs_(sgs), oracle_(oracle), opt_(opt), scopes_(sys) {}

  SearchResult run() {
    auto t0 = std::chrono::steady_clock::now();
    SearchResult result;
    SearchStats& st = result.stats;
    const SearchOptions& so = opt_.search;

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
    std::vector<uint8_t> on_stack;

    auto local_of = [&](ProcId p, const Labeling& l) -> StateId {
      auto it = sgs_[p].index.find(l);
      if (it == sgs_[p].index.end())
        throw Error(ErrorKind::Internal,
                    "reduced search reached a local state missing from the over-approximation");
      return it->second;
    };

    auto global_fail = [&](const std::vector<StateId>& key) {
      for (ProcId p = 0; p < nproc(); ++p)
        if (sgs_[p].fail[key[p]]) return true;
      return false;
    };
    auto global_enabled = [&](const std::vector<StateId>& key) {
      std::vector<TransId> all;
      for (ProcId p = 0; p < nproc(); ++p)
        all.insert(all.end(), sgs_[p].enabled_cache[key[p]].begin(),
                   sgs_[p].enabled_cache[key[p]].end());
      std::sort(all.begin(), all.end());
      return all;
    };
    auto violates_safety = [&](const std::vector<StateId>& key) {
      if (!sys_.safety) return false;
      std::vector<const Labeling*> ls(nproc());
      for (ProcId p = 0; p < nproc(); ++p) ls[p] = &sgs_[p].labels[key[p]];
      Labeling full = scopes_.full_valuation(sys_, ls);
      return !bool_expr_holds(*sys_.safety, full);
    };

    // Successor key of firing t from key (no interning of the global state).
    auto successor_key = [&](const std::vector<StateId>& key, TransId t) {
      const TransitionDef& tr = sys_.trans(t);
      std::vector<StateId> next = key;
      auto changed = detail::changes_of(sys_, scopes_.procs[tr.owner],
                                        sgs_[tr.owner].labels[key[tr.owner]], tr);
      std::vector<ProcId> affected;
      for (const auto& ch : changed)
        for (ProcId q : scopes_.seen_by[ch.var]) affected.push_back(q);
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      for (ProcId q : affected) {
        Labeling l = sgs_[q].labels[key[q]];
        for (const auto& ch : changed) {
          int32_t slot = scopes_.procs[q].slot_of[ch.var];
          if (slot >= 0) l[slot] = ch.value;
        }
        next[q] = local_of(q, l);
      }
      return next;
    };

    struct Frame {
      StateId state;
      TransId entered_via;
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
    auto visit = [&](std::vector<StateId> key, const TransId* entered) -> std::optional<StateId> {
      auto it = table.find(key);
      if (it != table.end()) return it->second;
      if (states.size() >= so.max_states) {
        st.budget_exceeded = true;
        stop = true;
        return std::nullopt;
      }
      StateId id = static_cast<StateId>(states.size());
      states.push_back(key);
      table.emplace(states.back(), id);
      // The state is about to become a stack frame; marking it now lets the
      // proviso see self-loops as cycle-closing.
      on_stack.push_back(1);

      bool is_fail = global_fail(key);
      std::vector<TransId> en = is_fail ? std::vector<TransId>{} : global_enabled(key);
      if (violates_safety(key) && !st.safety_found) {
        st.safety_found = true;
        st.safety_witness = entered ? current_path(*entered) : std::vector<TransId>{};
        if (so.stop_on_first) stop = true;
      }
      if (!is_fail && en.empty() && !st.deadlock_found) {
        st.deadlock_found = true;
        st.deadlock_witness = entered ? current_path(*entered) : std::vector<TransId>{};
        if (so.stop_on_first) stop = true;
      }

      std::vector<TransId> ample;
      if (!en.empty()) {
        AmpleContext ctx;
        ctx.enabled = en;
        ctx.enabled_bits = TidSet(sys_.transitions.size());
        for (TransId t : en) ctx.enabled_bits.set(t);
        ctx.oracle = &oracle_;
        ctx.mode = opt_.mode;
        ctx.use_proviso = opt_.use_proviso;
        if (ctx.mode == PorMode::Cond2Prime) {
          ctx.dc_hits = TidSet(sys_.transitions.size());
          for (ProcId p = 0; p < nproc(); ++p)
            if (const TidSet* hits = oracle_.dc_at(p, key[p])) ctx.dc_hits.or_with(*hits);
        }
        const auto& key_ref = states[id];
        ctx.successor_on_stack = [&, this](TransId t) {
          auto nk = successor_key(key_ref, t);
          auto nit = table.find(nk);
          return nit != table.end() && on_stack[nit->second];
        };
        AmpleSet a = compute_ample(ctx);
        ample = std::move(a.transitions);
        st.ample_hist[ample.size()]++;
      } else {
        st.ample_hist[0]++;
      }

      if (so.reverse_order) std::reverse(ample.begin(), ample.end());
      Frame f;
      f.state = id;
      f.entered_via = entered ? *entered : 0;
      f.todo = std::move(ample);
      stack.push_back(std::move(f));
      st.peak_depth = std::max<uint32_t>(st.peak_depth, static_cast<uint32_t>(stack.size()));
      return id;
    };

    std::vector<StateId> init_key(nproc());
    for (ProcId p = 0; p < nproc(); ++p) init_key[p] = sgs_[p].initial;
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
        on_stack[f.state] = 0;
        stack.pop_back();
        continue;
      }
      TransId t = f.todo[f.idx++];
      StateId src = f.state;
      auto key = successor_key(states[src], t);
      st.edges++;
      auto dst = visit(std::move(key), &t);
      if (dst && so.build_graph) edges.push_back(EdgeRec{src, t, *dst});
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
    if (opt_.baseline_states && st.states > 0)
      st.reduction_vs_baseline =
          static_cast<double>(*opt_.baseline_states) / static_cast<double>(st.states);

    if (so.build_graph && !st.budget_exceeded) {
      StateGraph& g = result.graph;
      g.owner_name = "reduced";
      g.owner = -1;
      g.vars.resize(sys_.vars.size());
      for (VarId v = 0; v < sys_.vars.size(); ++v) g.vars[v] = v;
      g.slot_of.resize(sys_.vars.size());
      for (VarId v = 0; v < sys_.vars.size(); ++v) g.slot_of[v] = static_cast<int32_t>(v);
      for (const auto& key : states) {
        std::vector<const Labeling*> ls(nproc());
        for (ProcId p = 0; p < nproc(); ++p) ls[p] = &sgs_[p].labels[key[p]];
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

  const SystemDef& sys_;
  const std::vector<StateGraph>& sgs_;
  const DependenceOracle& oracle_;
  const PorOptions& opt_;
  SystemScopes scopes_;
};

}  // namespace

SearchResult explore_por(const SystemDef& sys, const std::vector<StateGraph>& sgs,
                         const DependenceOracle& oracle, const PorOptions& options) {
  return PorSearch(sys, sgs, oracle, options).run();
}

}  // namespace porlock
