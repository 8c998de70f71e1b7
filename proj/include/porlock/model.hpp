#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace porlock {

using VarId = uint32_t;
using TransId = uint32_t;
using ProcId = uint32_t;
using Value = int32_t;
using StateId = uint32_t;

constexpr int32_t kEnvEdge = -1;  // edge tag for environment (constraint) moves

enum class ErrorKind {
  ContractViolation,
  DomainOverflow,
  InvalidWitness,
  CompositionMismatch,
  Parameter,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class VarKind { Shared, Local };

struct VariableDecl {
  std::string name;
  Value lo = 0;
  Value hi = 1;
  Value init = 0;
  VarKind kind = VarKind::Shared;
  ProcId owner = 0;  // meaningful for locals only
  bool operator==(const VariableDecl&) const = default;
};

// One atomic proposition (var, value).
struct Proposition {
  VarId var;
  Value value;
  bool operator==(const Proposition&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Gt };

struct Cmp {
  VarId var;
  CmpOp op;
  Value k;
  bool operator==(const Cmp&) const = default;
};

inline bool cmp_holds(const Cmp& c, Value v) {
  switch (c.op) {
    case CmpOp::Eq: return v == c.k;
    case CmpOp::Ne: return v != c.k;
    case CmpOp::Lt: return v < c.k;
    case CmpOp::Gt: return v > c.k;
  }
  return false;
}

// Boolean expression over comparisons, used for fail/safety predicates.
// Nodes are flattened: an And never directly contains an And, same for Or.
struct BoolExpr {
  enum class Kind { Cmp, And, Or } kind = Kind::Cmp;
  Cmp cmp{};                       // Kind::Cmp
  std::vector<BoolExpr> children;  // Kind::And / Kind::Or
  bool operator==(const BoolExpr&) const = default;
};

enum class EffectKind { Set, Inc, Dec };

struct Effect {
  VarId var;
  EffectKind kind;
  Value k = 0;  // Set only
  bool operator==(const Effect&) const = default;
};

struct TransitionDef {
  std::string id;  // globally unique
  ProcId owner = 0;
  std::vector<Cmp> guard;  // conjunction
  std::vector<Effect> effects;
  bool operator==(const TransitionDef&) const = default;
};

struct ProcessDef {
  std::string name;
  std::vector<VarId> locals;            // sorted
  std::vector<VarId> visible;           // locals + referenced shared, sorted
  std::vector<TransId> transitions;     // indices into SystemDef::transitions
  std::optional<BoolExpr> fail_when;
  bool operator==(const ProcessDef&) const = default;
};

struct SystemDef {
  std::string name;
  std::vector<VariableDecl> vars;            // shared first is not guaranteed; id = index
  std::vector<ProcessDef> processes;
  std::vector<TransitionDef> transitions;    // sorted by id string; TransId = index
  std::optional<BoolExpr> safety;            // invariant; violation = state where it is false

  const VariableDecl& var(VarId v) const { return vars[v]; }
  const TransitionDef& trans(TransId t) const { return transitions[t]; }

  std::optional<VarId> find_var(const std::string& name) const;
  std::optional<TransId> find_trans(const std::string& id) const;

  bool operator==(const SystemDef&) const = default;
};

// A labeling is a total valuation of some variable scope, one value per
// variable slot. The scope (which VarId each slot holds) lives in the
// surrounding StateGraph or system context.
using Labeling = std::vector<Value>;

struct LabelingHash {
  size_t operator()(const Labeling& l) const {
    uint64_t h = 1469598103934665603ull;
    for (Value v : l) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

struct OutEdge {
  int32_t tid;   // TransId or kEnvEdge
  StateId dst;
  // Composition clause tag: 0 = none/local, 'b', 'c', 'd' per the
  // parallel-composition definition. Only compose() fills this.
  char clause = 0;
  bool operator==(const OutEdge&) const = default;
};

// State graph: variables with domains, labeled states, initial state,
// tagged transition edges, fail flags, per-state enabled cache.
struct StateGraph {
  std::string owner_name;
  int owner = -1;  // process index, or -1 for composites
  std::vector<VarId> vars;       // sorted ascending
  std::vector<int32_t> slot_of;  // VarId -> slot in labelings, -1 if absent

  std::vector<Labeling> labels;
  std::vector<uint8_t> fail;
  std::unordered_map<Labeling, StateId, LabelingHash> index;
  StateId initial = 0;
  std::vector<std::vector<OutEdge>> out;
  // Enabled own transitions per state, sorted by TransId. Filled for local
  // SGs during construction; empty for composites.
  std::vector<std::vector<TransId>> enabled_cache;

  size_t num_states() const { return labels.size(); }
  size_t num_edges() const {
    size_t n = 0;
    for (const auto& es : out) n += es.size();
    return n;
  }

  int32_t slot(VarId v) const { return slot_of[v]; }
  Value value_of(StateId s, VarId v) const { return labels[s][slot_of[v]]; }

  // Interns a labeling; returns (id, inserted).
  std::pair<StateId, bool> intern(const Labeling& l, bool is_fail);
  // Adds edge if not present; returns true if added.
  bool add_edge(StateId src, int32_t tid, StateId dst, char clause = 0);
  bool has_edge(StateId src, int32_t tid, StateId dst) const;
};

// Global state of M = M1 || ... || Mn: an n-tuple of local state ids.
struct GlobalState {
  std::vector<StateId> locals;
  bool operator==(const GlobalState&) const = default;
};

// in(s^, s_i): does the global state's component for `proc` equal `local`?
inline bool in_pred(const GlobalState& g, StateId local, ProcId proc) {
  if (proc >= g.locals.size()) throw Error(ErrorKind::Parameter, "in_pred: process index out of range");
  return g.locals[proc] == local;
}

// --- Guard / effect semantics ------------------------------------------------

// Evaluates a conjunction against a labeling indexed directly by VarId.
bool guard_holds_global(const std::vector<Cmp>& guard, const Labeling& by_var);

// Evaluates a conjunction against an SG labeling; every referenced variable
// must be in scope.
bool guard_holds(const StateGraph& g, const std::vector<Cmp>& guard, const Labeling& label);

// Conjuncts on out-of-scope variables are treated as true (existential
// abstraction); used when judging foreign transitions inside a local SG.
bool guard_holds_restricted(const StateGraph& g, const std::vector<Cmp>& guard, const Labeling& label);

bool bool_expr_holds(const BoolExpr& e, const std::vector<Value>& by_var);
bool bool_expr_holds_sg(const StateGraph& g, const BoolExpr& e, const Labeling& label);

// Enabled transitions of `candidates` whose guards hold in `by_var`
// (global labeling indexed by VarId). Result sorted by TransId.
std::vector<TransId> enabled(const SystemDef& sys, const Labeling& by_var,
                             const std::vector<TransId>& candidates);
// All transitions of the system against a global labeling.
std::vector<TransId> enabled(const SystemDef& sys, const Labeling& by_var);

// Fires a transition on a global labeling (indexed by VarId). The transition
// must be enabled; effects apply simultaneously to a copy.
Labeling fire(const SystemDef& sys, TransId t, const Labeling& by_var);

// Applies effects in-place over an SG-scoped labeling; effects on
// out-of-scope variables are dropped. Returns false on domain overflow.
bool apply_effects_restricted(const SystemDef& sys, const StateGraph& g,
                              const std::vector<Effect>& effects, Labeling& label);

// --- Validation ---------------------------------------------------------------

// Checks all structural invariants of a SystemDef; throws Error(Internal) on
// violation. Parser output always passes; useful for hand-built systems.
void check_system(const SystemDef& sys);

// Variables visible to a process, with initial labeling in slot order.
Labeling initial_labeling(const SystemDef& sys, const StateGraph& g);
// Full global labeling (indexed by VarId) from initial values.
Labeling initial_global_labeling(const SystemDef& sys);

}  // namespace porlock
