#pragma once

#include <stdexcept>
#include <string>

#include "porlock/parser.hpp"

namespace porlock::testing {

// Three-process ring: M1 computes x from z through inverter v, M2 computes y
// from z through inverter w, M3 drives z from x and y through C-element u.
// Initially only z is excited.
inline std::string fig1_text() {
  return R"(system fig1;

shared x : 0..1 = 0;
shared y : 0..1 = 0;
shared z : 0..1 = 0;

process M1 {
  var v : 0..1 = 1;
  trans v- : guard z == 1 && v == 1 -> v := 0;
  trans v+ : guard z == 0 && v == 0 -> v := 1;
  trans x+ : guard v == 0 && x == 0 -> x := 1;
  trans x- : guard v == 1 && x == 1 -> x := 0;
}

process M2 {
  var w : 0..1 = 1;
  trans w- : guard z == 1 && w == 1 -> w := 0;
  trans w+ : guard z == 0 && w == 0 -> w := 1;
  trans y+ : guard w == 0 && y == 0 -> y := 1;
  trans y- : guard w == 1 && y == 1 -> y := 0;
}

process M3 {
  var u : 0..1 = 0;
  trans u+ : guard x == 1 && y == 1 && u == 0 -> u := 1;
  trans u- : guard x == 0 && y == 0 && u == 1 -> u := 0;
  trans z+ : guard u == 0 && z == 0 -> z := 1;
  trans z- : guard u == 1 && z == 1 -> z := 0;
}
)";
}

inline SystemDef parse_or_die(const std::string& text) {
  ParseResult r = parse_system(text);
  if (!r.ok()) {
    std::string msg = "fixture failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.render();
    throw std::runtime_error(msg);
  }
  return std::move(*r.system);
}

}  // namespace porlock::testing
