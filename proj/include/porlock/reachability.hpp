#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "porlock/model.hpp"

namespace porlock {

enum class Verdict { Ok, Deadlock, SafetyViolation, BudgetExceeded };

std::string verdict_name(Verdict v);

struct SearchOptions {
  uint64_t max_states = 10'000'000;  // state budget; exceeding aborts the search
  bool stop_on_first = false;        // stop at the first violation (default: exhaustive)
  bool build_graph = false;          // materialize the composite StateGraph
  bool reverse_order = false;        // expand enabled sets in reverse (order-independence checks)
};

struct SearchStats {
  uint64_t states = 0;
  uint64_t edges = 0;
  uint32_t peak_depth = 0;
  double time_ms = 0.0;
  Verdict verdict = Verdict::Ok;
  bool deadlock_found = false;
  bool safety_found = false;
  bool budget_exceeded = false;
  std::vector<TransId> deadlock_witness;
  std::vector<TransId> safety_witness;
  // POR runs only: histogram of ample-set sizes over expanded states.
  std::map<size_t, uint64_t> ample_hist;
  // POR runs only, when a monolithic baseline was supplied.
  std::optional<double> reduction_vs_baseline;

  double ample_avg() const;
  const std::vector<TransId>& witness() const {
    return verdict == Verdict::SafetyViolation ? safety_witness : deadlock_witness;
  }
};

struct SearchResult {
  StateGraph graph;  // empty unless options.build_graph
  SearchStats stats;
};

// Monolithic depth-first reachability over the interleaving semantics
// (two-stack DFS with a visited table). Expands every enabled transition at
// every non-fail state.
SearchResult explore_full(const SystemDef& sys, const SearchOptions& options = {});

// Replays a transition path from the initial state, validating enabledness at
// each step; returns the visited global labelings (indexed by VarId),
// including the initial one.
std::vector<Labeling> replay(const SystemDef& sys, const std::vector<TransId>& path);

}  // namespace porlock
