#pragma once

#include <functional>

#include "porlock/dependence.hpp"
#include "porlock/model.hpp"
#include "porlock/reachability.hpp"

namespace porlock {

enum class PorMode { Cond2, Cond2Prime };

// Inputs for one ample-set computation, assembled by the search engine.
struct AmpleContext {
  std::vector<TransId> enabled;  // sorted
  TidSet enabled_bits;
  const DependenceOracle* oracle = nullptr;
  PorMode mode = PorMode::Cond2;
  // Union of D_C hits over the global state's components (Cond2Prime only).
  TidSet dc_hits;
  // Whether firing t from this state lands on a state currently on the DFS
  // stack; consulted by the weak cycle proviso.
  std::function<bool(TransId)> successor_on_stack;
  bool use_proviso = true;
};

struct AmpleSet {
  std::vector<TransId> transitions;
  bool fully_expanded = false;
};

// Three-step ample-set computation under conditions C0-C3: a single
// transition with no dependence obligations, else the smallest
// dependence-closed enabled class with none, else full expansion; visible
// transitions in a proper subset and all-cycle-closing subsets both force
// full expansion.
AmpleSet compute_ample(const AmpleContext& ctx);

struct PorOptions {
  SearchOptions search;
  PorMode mode = PorMode::Cond2;
  bool use_proviso = true;  // disabling is for regression experiments only
  std::optional<uint64_t> baseline_states;  // monolithic |S| for the ratio stat
};

// Stateful DFS expanding ample sets; local states are interned against the
// CRA state graphs so conditional-dependency lookups key directly into them.
SearchResult explore_por(const SystemDef& sys, const std::vector<StateGraph>& sgs,
                         const DependenceOracle& oracle, const PorOptions& options = {});

}  // namespace porlock
