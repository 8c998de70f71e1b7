#pragma once

#include <cstdint>
#include <string>

namespace porlock {

// Parameterized model families, emitted as .pnet text. All outputs parse,
// validate, and round-trip through the canonical printer.

// Token-flow chain of n stages with per-boundary full/empty bits, a source at
// the left end and a sink at the right; the first stages carry a one-shot
// priming transition that conflicts with their take. Deadlock-free by
// construction.
std::string gen_fifo(int n);

// Token-ring arbiter: n cells pass a single token; a cell with a pending
// want may grab the token into a grant instead of passing it on. Safety
// asserts at most one grant is high. With inject_bug, release keeps the
// grant high, making two simultaneous grants reachable.
std::string gen_arbiter(int n, bool inject_bug = false);

// Distributed-mutual-exclusion ring: n cells with one client each, token
// passing between cells, request/acknowledge handshake per client. Safety
// asserts at most one acknowledge is high. With inject_bug, a cell may pass
// the token while its acknowledge is still high.
std::string gen_dme(int n, bool inject_bug = false);

struct RandomBounds {
  int max_processes = 4;
  int max_locals = 3;      // per process
  int max_transitions = 6; // per process
  bool allow_safety = true;
  bool allow_fail = true;
};

// Seed-deterministic small system for oracle campaigns.
std::string gen_random(uint64_t seed, const RandomBounds& bounds = {});

}  // namespace porlock
