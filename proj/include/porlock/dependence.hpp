#pragma once

#include <unordered_map>
#include <unordered_set>

#include "porlock/model.hpp"

namespace porlock {

// Fixed-width bitset over transition ids.
class TidSet {
 public:
  TidSet() = default;
  explicit TidSet(size_t n) : n_(n), words_((n + 63) / 64, 0) {}
  void set(TransId t) { words_[t >> 6] |= 1ull << (t & 63); }
  void clear(TransId t) { words_[t >> 6] &= ~(1ull << (t & 63)); }
  bool test(TransId t) const { return words_[t >> 6] >> (t & 63) & 1; }
  bool intersects(const TidSet& o) const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  // Any bit of this set outside `o`?
  bool any_outside(const TidSet& o) const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return true;
    return false;
  }
  void or_with(const TidSet& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }
  size_t size() const { return n_; }
  bool operator==(const TidSet&) const = default;

 private:
  size_t n_ = 0;
  std::vector<uint64_t> words_;
};

// Symmetric irreflexive dependence relation D over transitions, the
// conditional-dependency set D_C of (state graph, local state, transition)
// entries, and the set of property-visible transitions.
struct DependenceOracle {
  size_t n_trans = 0;
  std::vector<TidSet> d;  // row per transition
  // (process << 32 | local state) -> transitions with a conditional
  // dependency pending at that local state.
  std::unordered_map<uint64_t, TidSet> d_cond;
  TidSet visible;

  bool dependent(TransId a, TransId b) const { return d[a].test(b); }
  void set_dependent(TransId a, TransId b) {
    if (a == b) return;
    d[a].set(b);
    d[b].set(a);
  }
  static uint64_t dc_key(ProcId p, StateId s) { return (uint64_t(p) << 32) | s; }
  const TidSet* dc_at(ProcId p, StateId s) const {
    auto it = d_cond.find(dc_key(p, s));
    return it == d_cond.end() ? nullptr : &it->second;
  }
};

// Extracts D from the local state graphs: a pair is dependent iff some local
// state of an owner's SG witnesses a disabling or a non-commuting pair of
// firing orders; pairs that can interact in no SG scope are independent.
// Foreign transitions are judged by their guard conjuncts and effects over
// the SG's variables.
std::vector<TidSet> extract_dependence(const SystemDef& sys, const std::vector<StateGraph>& sgs);

// For every dependent pair, walks each owner SG backward from the states
// where the pair holds (both enabled), recording (state, transition) entries
// while one of the pair stays enabled. Environment edges are traversed.
std::unordered_map<uint64_t, TidSet> build_conditional_deps(const SystemDef& sys,
                                                            const std::vector<StateGraph>& sgs,
                                                            const std::vector<TidSet>& d);

// Transitions whose effects assign a variable mentioned by the safety
// predicate; empty when there is none.
TidSet visible_transitions(const SystemDef& sys);

DependenceOracle build_oracle(const SystemDef& sys, const std::vector<StateGraph>& sgs);

}  // namespace porlock
