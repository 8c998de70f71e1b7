#include "porlock/benchgen.hpp"

#include <sstream>
#include <vector>

#include "porlock/model.hpp"

namespace porlock {

namespace {

// splitmix64: fixed sequence everywhere, unlike <random> distributions.
struct Rng {
  uint64_t state;
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  bool chance(int num, int den) { return below(den) < static_cast<uint64_t>(num); }
};

}  // namespace

std::string gen_fifo(int n) {
  if (n < 1) throw Error(ErrorKind::Parameter, "gen_fifo: stage count must be >= 1");
  std::ostringstream os;
  os << "system fifo" << n << ";\n\n";
  for (int i = 0; i <= n; ++i) os << "shared f" << i << " : 0..1 = 0;\n";
  // Boot flags form a chain: boot(i) can only fire after boot(i-1). The last
  // flag has no right-hand reader and stays local.
  for (int i = 1; i < n; ++i) os << "shared g" << i << " : 0..1 = 0;\n";
  for (int i = 1; i <= n; ++i) {
    os << "\nprocess S" << i << " {\n";
    if (i == n) os << "  var g" << n << " : 0..1 = 0;\n";
    if (i == 1) os << "  trans src : guard f0 == 0 -> f0 := 1;\n";
    os << "  trans mv" << i << " : guard f" << i - 1 << " == 1 && f" << i << " == 0 -> f" << i - 1
       << " := 0, f" << i << " := 1;\n";
    if (i == n) os << "  trans sink : guard f" << n << " == 1 -> f" << n << " := 0;\n";
    // One-shot initialisation pulse: refills the input slot once. It
    // conflicts with the slot's writer and mover, so after it dies every
    // pipeline transition keeps a permanently disabled dependence partner.
    os << "  trans boot" << i << " : guard ";
    if (i > 1) os << "g" << i - 1 << " == 1 && ";
    os << "g" << i << " == 0 -> f" << i - 1 << " := 1";
    if (i == n) os << ", f" << n << " := 1";
    os << ", g" << i << " := 1;\n";
    os << "}\n";
  }
  return os.str();
}

namespace {

std::string at_most_one(const std::string& prefix, int n) {
  // Pairwise: (x1 == 0 || x2 == 0) && ...
  std::ostringstream os;
  bool first = true;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      if (!first) os << " && ";
      first = false;
      os << "(" << prefix << i << " == 0 || " << prefix << j << " == 0)";
    }
  return os.str();
}

}  // namespace

std::string gen_arbiter(int n, bool inject_bug) {
  if (n < 2) throw Error(ErrorKind::Parameter, "gen_arbiter: ring needs at least 2 cells");
  std::ostringstream os;
  os << "system arb" << n << ";\n\n";
  for (int i = 0; i < n; ++i) os << "shared r" << i << " : 0..1 = " << (i == 0 ? 1 : 0) << ";\n";
  for (int i = 1; i <= n; ++i) {
    int in = i - 1;       // slot consumed
    int out = i % n;      // slot produced
    os << "\nprocess A" << i << " {\n";
    os << "  var g" << i << " : 0..1 = 0;\n";
    os << "  var w" << i << " : 0..1 = 1;\n";
    os << "  trans want" << i << " : guard w" << i << " == 0 && g" << i << " == 0 -> w" << i
       << " := 1;\n";
    os << "  trans grab" << i << " : guard r" << in << " == 1 && w" << i << " == 1 -> r" << in
       << " := 0, g" << i << " := 1, w" << i << " := 0;\n";
    os << "  trans pass" << i << " : guard r" << in << " == 1 -> r" << in << " := 0, r" << out
       << " := 1;\n";
    if (inject_bug)
      os << "  trans rel" << i << " : guard g" << i << " == 1 -> r" << out << " := 1;\n";
    else
      os << "  trans rel" << i << " : guard g" << i << " == 1 -> g" << i << " := 0, r" << out
         << " := 1;\n";
    os << "}\n";
  }
  os << "\nsafety " << at_most_one("g", n) << ";\n";
  return os.str();
}

std::string gen_dme(int n, bool inject_bug) {
  if (n < 2) throw Error(ErrorKind::Parameter, "gen_dme: ring needs at least 2 cells");
  std::ostringstream os;
  os << "system dme" << n << ";\n\n";
  for (int i = 0; i < n; ++i) os << "shared s" << i << " : 0..1 = " << (i == 0 ? 1 : 0) << ";\n";
  for (int i = 1; i <= n; ++i)
    os << "shared q" << i << " : 0..1 = 0;\nshared a" << i << " : 0..1 = 0;\n";
  for (int i = 1; i <= n; ++i) {
    int in = i - 1;
    int out = i % n;
    os << "\nprocess C" << i << " {\n";
    os << "  var h" << i << " : 0..1 = 0;\n";
    os << "  trans ctake" << i << " : guard s" << in << " == 1 && h" << i << " == 0 -> s" << in
       << " := 0, h" << i << " := 1;\n";
    os << "  trans grant" << i << " : guard h" << i << " == 1 && q" << i << " == 1 && a" << i
       << " == 0 -> a" << i << " := 1;\n";
    os << "  trans ungrant" << i << " : guard a" << i << " == 1 && q" << i << " == 0 -> a" << i
       << " := 0;\n";
    if (inject_bug)
      os << "  trans pass" << i << " : guard h" << i << " == 1 && q" << i << " == 0 -> h" << i
         << " := 0, s" << out << " := 1;\n";
    else
      os << "  trans pass" << i << " : guard h" << i << " == 1 && a" << i << " == 0 && q" << i
         << " == 0 -> h" << i << " := 0, s" << out << " := 1;\n";
    os << "}\n";
    os << "\nprocess U" << i << " {\n";
    os << "  trans req" << i << " : guard q" << i << " == 0 && a" << i << " == 0 -> q" << i
       << " := 1;\n";
    os << "  trans done" << i << " : guard q" << i << " == 1 && a" << i << " == 1 -> q" << i
       << " := 0;\n";
    os << "}\n";
  }
  os << "\nsafety " << at_most_one("a", n) << ";\n";
  return os.str();
}

std::string gen_random(uint64_t seed, const RandomBounds& bounds) {
  Rng rng{seed * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull};
  std::ostringstream os;
  os << "system rnd" << seed << ";\n\n";

  int nproc = bounds.max_processes <= 1 ? 1 : rng.range(2, bounds.max_processes);
  int nshared = rng.range(1, 2);

  struct Var {
    std::string name;
    int hi;
  };
  std::vector<Var> shared;
  for (int i = 0; i < nshared; ++i) {
    Var v;
    v.name = std::string("s") + char('a' + i);
    v.hi = rng.chance(1, 4) ? 2 : 1;
    shared.push_back(v);
    os << "shared " << v.name << " : 0.." << v.hi << " = " << rng.range(0, v.hi) << ";\n";
  }

  for (int p = 0; p < nproc; ++p) {
    std::vector<Var> pool = shared;
    std::ostringstream body;
    int nloc = rng.range(0, std::max(0, bounds.max_locals - 1));
    for (int i = 0; i < nloc; ++i) {
      Var v;
      v.name = "l" + std::to_string(p) + char('a' + i);
      v.hi = rng.chance(1, 4) ? 2 : 1;
      pool.push_back(v);
      body << "  var " << v.name << " : 0.." << v.hi << " = " << rng.range(0, v.hi) << ";\n";
    }
    if (bounds.allow_fail && rng.chance(1, 8)) {
      const Var& v = pool[rng.below(pool.size())];
      body << "  fail when " << v.name << " == " << rng.range(0, v.hi) << ";\n";
    }
    int ntrans = rng.range(1, std::max(1, bounds.max_transitions));
    for (int t = 0; t < ntrans; ++t) {
      body << "  trans p" << p << "t" << t << " : guard ";
      int nguard = rng.range(1, 2);
      std::vector<std::string> guards;
      for (int gi = 0; gi < nguard; ++gi) {
        const Var& v = pool[rng.below(pool.size())];
        const char* ops[] = {"==", "!=", "<", ">"};
        int op = v.hi == 1 ? 0 : static_cast<int>(rng.below(4));  // booleans: == only
        int k = rng.range(0, v.hi);
        guards.push_back(v.name + " " + ops[op] + " " + std::to_string(k));
      }
      // Effects: distinct variables; increments are guarded against overflow.
      int neff = rng.range(1, 2);
      std::vector<size_t> chosen;
      std::vector<std::string> effects;
      for (int ei = 0; ei < neff; ++ei) {
        size_t vi = rng.below(pool.size());
        bool dup = false;
        for (size_t c : chosen) dup |= c == vi;
        if (dup) continue;
        chosen.push_back(vi);
        const Var& v = pool[vi];
        int kind = v.hi >= 2 ? static_cast<int>(rng.below(3)) : 0;
        if (kind == 1) {
          effects.push_back(v.name + " := " + v.name + " + 1");
          guards.push_back(v.name + " < " + std::to_string(v.hi));
        } else if (kind == 2) {
          effects.push_back(v.name + " := " + v.name + " - 1");
          guards.push_back(v.name + " > 0");
        } else {
          effects.push_back(v.name + " := " + std::to_string(rng.range(0, v.hi)));
        }
      }
      for (size_t i = 0; i < guards.size(); ++i) body << (i ? " && " : "") << guards[i];
      body << " -> ";
      for (size_t i = 0; i < effects.size(); ++i) body << (i ? ", " : "") << effects[i];
      body << ";\n";
    }
    os << "\nprocess P" << p << " {\n" << body.str() << "}\n";
  }

  if (bounds.allow_safety && rng.chance(1, 2)) {
    const Var& v = shared[rng.below(shared.size())];
    os << "\nsafety " << v.name << " == " << rng.range(0, v.hi);
    if (rng.chance(1, 2)) {
      const Var& w = shared[rng.below(shared.size())];
      os << " || " << w.name << " == " << rng.range(0, w.hi);
    }
    os << ";\n";
  }
  return os.str();
}

}  // namespace porlock
