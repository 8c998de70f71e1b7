#include "porlock/dumps.hpp"

#include <algorithm>
#include <sstream>

namespace porlock {

std::string dump_sg(const SystemDef& sys, const StateGraph& g) {
  std::ostringstream os;
  os << "sg " << g.owner_name << " states=" << g.num_states() << " init=" << g.initial << "\n";

  // Variable order within a labeling line: by name.
  std::vector<size_t> slots(g.vars.size());
  for (size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::sort(slots.begin(), slots.end(), [&](size_t a, size_t b) {
    return sys.var(g.vars[a]).name < sys.var(g.vars[b]).name;
  });

  for (StateId s = 0; s < g.num_states(); ++s) {
    os << "state " << s << " fail=" << int(g.fail[s]) << " {";
    for (size_t i = 0; i < slots.size(); ++i) {
      if (i) os << ",";
      os << sys.var(g.vars[slots[i]]).name << "=" << g.labels[s][slots[i]];
    }
    os << "}\n";
  }

  std::vector<std::tuple<StateId, std::string, StateId>> edges;
  for (StateId s = 0; s < g.num_states(); ++s)
    for (const auto& e : g.out[s])
      edges.emplace_back(s, e.tid == kEnvEdge ? "env" : sys.trans(e.tid).id, e.dst);
  std::sort(edges.begin(), edges.end());
  for (const auto& [src, tid, dst] : edges) os << "edge " << src << " " << tid << " " << dst << "\n";
  return os.str();
}

std::string dump_dependence(const SystemDef& sys, const DependenceOracle& oracle) {
  std::ostringstream os;
  std::vector<std::string> dep_lines;
  for (TransId a = 0; a < oracle.n_trans; ++a)
    for (TransId b = a + 1; b < oracle.n_trans; ++b)
      if (oracle.dependent(a, b))
        dep_lines.push_back("dep " + sys.trans(a).id + " " + sys.trans(b).id);
  std::sort(dep_lines.begin(), dep_lines.end());
  for (const auto& l : dep_lines) os << l << "\n";

  std::vector<std::string> dc_lines;
  for (const auto& [key, tids] : oracle.d_cond) {
    ProcId p = static_cast<ProcId>(key >> 32);
    StateId s = static_cast<StateId>(key & 0xffffffffu);
    for (TransId t = 0; t < oracle.n_trans; ++t)
      if (tids.test(t))
        dc_lines.push_back("depc " + sys.processes[p].name + ":" + std::to_string(s) + " " +
                           sys.trans(t).id);
  }
  std::sort(dc_lines.begin(), dc_lines.end());
  for (const auto& l : dc_lines) os << l << "\n";
  return os.str();
}

}  // namespace porlock
