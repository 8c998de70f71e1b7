#include <doctest.h>

#include "porlock/benchgen.hpp"
#include "porlock/cra.hpp"
#include "porlock/parser.hpp"
#include "support/fixtures.hpp"

using namespace porlock;
using namespace porlock::testing;

TEST_CASE("parse: fig1 yields 3 processes and 6 variables") {
  SystemDef sys = parse_or_die(fig1_text());
  CHECK(sys.processes.size() == 3);
  CHECK(sys.vars.size() == 6);
  CHECK(sys.transitions.size() == 12);
  CHECK(sys.find_trans("v-").has_value());
  CHECK(sys.find_trans("x+").has_value());
}

TEST_CASE("parse: empty process body is a valid degenerate system") {
  SystemDef sys = parse_or_die("system s;\nprocess P {\n}\n");
  REQUIRE(sys.processes.size() == 1);
  StateGraph g = init_local_sg(sys, 0);
  local_closure(sys, g, 0);
  CHECK(g.num_states() == 1);
  CHECK(g.num_edges() == 0);
}

TEST_CASE("parse: boolean toggle sugar expands to guard and assignment") {
  SystemDef sys = parse_or_die(
      "system s;\nshared a : 0..1 = 0;\n"
      "process P { trans a+; }\nprocess Q { trans a-; }\n");
  const auto& plus = sys.transitions[*sys.find_trans("a+")];
  CHECK(plus.guard == std::vector<Cmp>{Cmp{0, CmpOp::Eq, 0}});
  CHECK(plus.effects == std::vector<Effect>{Effect{0, EffectKind::Set, 1}});
  const auto& minus = sys.transitions[*sys.find_trans("a-")];
  CHECK(minus.guard == std::vector<Cmp>{Cmp{0, CmpOp::Eq, 1}});
  CHECK(minus.effects == std::vector<Effect>{Effect{0, EffectKind::Set, 0}});
}

TEST_CASE("print: canonical form sorts declarations") {
  SystemDef sys = parse_or_die(
      "system mini;\n"
      "shared zz : 0..1 = 0;\n"
      "shared aa : 0..2 = 1;\n"
      "process P {\n  var q : 0..1 = 0;\n  var b : 0..1 = 0;\n"
      "  trans t : guard zz == 0 && aa < 2 -> b := 1, q := 0;\n}\n");
  std::string expected =
      "system mini;\n"
      "\n"
      "shared aa : 0..2 = 1;\n"
      "shared zz : 0..1 = 0;\n"
      "\n"
      "process P {\n"
      "  var b : 0..1 = 0;\n"
      "  var q : 0..1 = 0;\n"
      "  trans t : guard zz == 0 && aa < 2 -> b := 1, q := 0;\n"
      "}\n";
  CHECK(print_system(sys) == expected);
}

TEST_CASE("round-trip: parse(print(s)) is structurally equal") {
  auto roundtrip = [](const SystemDef& sys) {
    ParseResult again = parse_system(print_system(sys));
    REQUIRE(again.ok());
    CHECK(*again.system == sys);
    CHECK(print_system(*again.system) == print_system(sys));
  };
  roundtrip(parse_or_die(fig1_text()));
  for (uint64_t seed = 0; seed < 100; ++seed)
    roundtrip(parse_or_die(gen_random(seed)));
}

TEST_CASE("diagnostics carry positions and stop SystemDef production") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    ParseResult r = parse_system(text);
    CHECK(!r.ok());
    bool found = false;
    for (const auto& d : r.diagnostics) {
      CHECK(d.line >= 1);
      CHECK(d.column >= 1);
      if (d.severity == Severity::Error && d.message.find(needle) != std::string::npos)
        found = true;
    }
    CHECK(found);
  };
  expect_error("system s\nprocess P {}\n", "expected ';'");
  expect_error("system s;\nshared a : 0..1 = 0;\nshared a : 0..1 = 0;\nprocess P { trans a+; }\n",
               "duplicate variable");
  expect_error("system s;\nprocess P { trans t : guard zz == 0 -> zz := 1; }\n", "undeclared");
  expect_error("system s;\nshared a : 0..1 = 7;\nprocess P { trans a+; }\n", "outside its domain");
  expect_error(
      "system s;\nprocess P { var a : 0..1 = 0; trans t : guard a == 0 -> a := 1; }\n"
      "process Q { trans t2 : guard a == 1 -> a := 0; }\n",
      "local to process");
  expect_error("system s;\nprocess P { trans t : guard t == ; }\n", "expected");
  expect_error(
      "system s;\nshared a : 0..1 = 0;\n"
      "process P { trans t : guard a == 0 || a == 1 -> a := 1; }\n",
      "conjunction");
  expect_error("system s;\nshared a : 0..1 = 0;\nprocess P { trans t : guard a == 0 -> a := 1, a := 0; }\n",
               "more than once");
}

TEST_CASE("underused shared variables warn but still parse") {
  ParseResult r = parse_system(
      "system s;\nshared a : 0..1 = 0;\n"
      "process P { trans a+; }\nprocess Q { var b : 0..1 = 0; trans b+; }\n");
  REQUIRE(r.ok());
  bool warned = false;
  for (const auto& d : r.diagnostics)
    if (d.severity == Severity::Warning && d.message.find("shared variable") != std::string::npos)
      warned = true;
  CHECK(warned);
}

TEST_CASE("parse is total on malformed input") {
  const char* junk[] = {
      "",
      ";;;",
      "system",
      "system s; process P { trans",
      "system s; process P { var a 0..1 }",
      "system s; shared a : 1..0 = 0; process P { trans a+; }",
      "system s; process P { trans t : guard -> ; }",
      "\xff\xfe garbage \x01",
  };
  for (const char* t : junk) {
    ParseResult r = parse_system(t);
    CHECK(!r.ok());
    CHECK(!r.diagnostics.empty());
  }
}
