#include <doctest.h>

#include "porlock/benchgen.hpp"
#include "porlock/model.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace porlock;
using namespace porlock::testing;

TEST_CASE("enabled: empty when no guard holds") {
  SystemDef sys = parse_or_die(
      "system s;\n"
      "process P {\n"
      "  var a : 0..1 = 0;\n"
      "  trans t0 : guard a == 1 -> a := 0;\n"
      "}\n");
  Labeling init = initial_global_labeling(sys);
  CHECK(enabled(sys, init).empty());
}

TEST_CASE("enabled: fig1 initial state enables exactly z+") {
  SystemDef sys = parse_or_die(fig1_text());
  Labeling init = initial_global_labeling(sys);
  auto en = enabled(sys, init);
  REQUIRE(en.size() == 1);
  CHECK(sys.trans(en[0]).id == "z+");
}

TEST_CASE("enabled: agrees with an independent guard evaluator on random systems") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    SystemDef sys = parse_or_die(gen_random(seed, RandomBounds{2, 3, 4}));
    auto g = oracle_reach(sys, 1 << 16);
    for (const auto& state : g.states) {
      auto got = enabled(sys, state);
      auto want = oracle_enabled(sys, state);
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("fire: empty effect list is the identity") {
  SystemDef sys;
  sys.name = "stub";
  sys.vars.push_back(VariableDecl{"a", 0, 1, 0, VarKind::Local, 0});
  ProcessDef p;
  p.name = "P";
  p.locals = {0};
  p.visible = {0};
  p.transitions = {0};
  sys.processes.push_back(p);
  sys.transitions.push_back(TransitionDef{"skip", 0, {}, {}});
  check_system(sys);
  Labeling init = initial_global_labeling(sys);
  CHECK(fire(sys, 0, init) == init);
}

TEST_CASE("fire: z+ flips z in the fig1 initial state") {
  SystemDef sys = parse_or_die(fig1_text());
  Labeling init = initial_global_labeling(sys);
  TransId zp = *sys.find_trans("z+");
  Labeling next = fire(sys, zp, init);
  VarId z = *sys.find_var("z");
  CHECK(next[z] == 1);
  for (VarId v = 0; v < sys.vars.size(); ++v)
    if (v != z) CHECK(next[v] == init[v]);
}

TEST_CASE("fire: commutes for an independence-satisfying pair, exhaustively") {
  // Two processes over disjoint variables: every co-enabled pair satisfies
  // the independence definition; check commutation at every reachable state.
  SystemDef sys = parse_or_die(
      "system s;\n"
      "process P { var a : 0..2 = 0; trans pa : guard a < 2 -> a := a + 1; }\n"
      "process Q { var b : 0..2 = 0; trans qb : guard b < 2 -> b := b + 1; }\n");
  TransId pa = *sys.find_trans("pa");
  TransId qb = *sys.find_trans("qb");
  auto g = oracle_reach(sys);
  int checked = 0;
  for (const auto& s : g.states) {
    if (!oracle_guard_holds(sys, pa, s) || !oracle_guard_holds(sys, qb, s)) continue;
    CHECK(fire(sys, qb, fire(sys, pa, s)) == fire(sys, pa, fire(sys, qb, s)));
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("fire: firing a disabled transition is a contract violation") {
  SystemDef sys = parse_or_die(fig1_text());
  Labeling init = initial_global_labeling(sys);
  TransId um = *sys.find_trans("u-");
  CHECK_THROWS_AS(fire(sys, um, init), Error);
  try {
    fire(sys, um, init);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContractViolation);
  }
}

TEST_CASE("fire: domain overflow names the variable and transition") {
  SystemDef sys = parse_or_die(
      "system s;\n"
      "process P { var a : 0..1 = 1; trans bump : guard a > 0 -> a := a + 1; }\n");
  Labeling init = initial_global_labeling(sys);
  try {
    fire(sys, *sys.find_trans("bump"), init);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainOverflow);
    CHECK(std::string(e.what()).find("a") != std::string::npos);
    CHECK(std::string(e.what()).find("bump") != std::string::npos);
  }
}

TEST_CASE("in_pred: component match and mismatch") {
  GlobalState g{{3, 7, 0}};
  CHECK(in_pred(g, 7, 1));
  CHECK(!in_pred(g, 6, 1));
  CHECK(in_pred(g, 3, 0));
  CHECK_THROWS_AS(in_pred(g, 0, 9), Error);
}

TEST_CASE("in_pred: random tuples agree with naive indexing") {
  uint64_t x = 12345;
  auto rnd = [&]() {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return x;
  };
  for (int i = 0; i < 200; ++i) {
    GlobalState g;
    size_t n = 1 + rnd() % 5;
    for (size_t j = 0; j < n; ++j) g.locals.push_back(static_cast<StateId>(rnd() % 10));
    ProcId p = static_cast<ProcId>(rnd() % n);
    StateId s = static_cast<StateId>(rnd() % 10);
    CHECK(in_pred(g, s, p) == (g.locals[p] == s));
  }
}
