#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "porlock/benchgen.hpp"
#include "porlock/composition.hpp"
#include "porlock/cra.hpp"
#include "porlock/dependence.hpp"
#include "porlock/dumps.hpp"
#include "porlock/parser.hpp"
#include "porlock/por.hpp"
#include "porlock/reachability.hpp"

namespace fs = std::filesystem;
using namespace porlock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInputError = 3;

std::optional<SystemDef> load_system(const std::string& path, bool safety_on) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ParseResult r = parse_system(buf.str());
  for (const auto& d : r.diagnostics) std::cerr << path << ": " << d.render() << "\n";
  if (!r.ok()) return std::nullopt;
  if (!safety_on) r.system->safety.reset();
  return std::move(r.system);
}

std::string format_stats_line(const SystemDef& sys, const std::string& mode,
                              const SearchStats& st) {
  std::ostringstream os;
  os << "name=" << sys.name << " mode=" << mode << " states=" << st.states
     << " edges=" << st.edges << " time_ms=" << static_cast<int64_t>(st.time_ms)
     << " verdict=" << verdict_name(st.verdict) << " ample_avg=";
  if (st.ample_hist.empty()) {
    os << "-";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", st.ample_avg());
    os << buf;
  }
  return os.str();
}

SearchStats run_mode(const SystemDef& sys, const std::string& mode, const SearchOptions& so) {
  if (mode == "mono") return explore_full(sys, so).stats;
  CraResult cra = build_local_sgs(sys);
  DependenceOracle oracle = build_oracle(sys, cra.sgs);
  PorOptions po;
  po.search = so;
  po.mode = mode == "por-cond" ? PorMode::Cond2Prime : PorMode::Cond2;
  return explore_por(sys, cra.sgs, oracle, po).stats;
}

std::string label_string(const SystemDef& sys, const Labeling& by_var) {
  // Sorted by variable name for stable output.
  std::vector<std::pair<std::string, Value>> vals;
  for (VarId v = 0; v < sys.vars.size(); ++v) vals.emplace_back(sys.var(v).name, by_var[v]);
  std::sort(vals.begin(), vals.end());
  std::string s = "{";
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) s += ",";
    s += vals[i].first + "=" + std::to_string(vals[i].second);
  }
  return s + "}";
}

int cmd_check(const std::string& file, const std::string& mode, bool safety_on, uint64_t budget,
              const std::string& stats_out, bool exhaustive) {
  auto sys = load_system(file, safety_on);
  if (!sys) return kExitInputError;

  SearchOptions so;
  so.max_states = budget;
  so.stop_on_first = !exhaustive;
  SearchStats st;
  try {
    st = run_mode(*sys, mode, so);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  std::ostringstream out;
  out << format_stats_line(*sys, mode, st) << "\n";
  if (st.verdict == Verdict::Deadlock || st.verdict == Verdict::SafetyViolation) {
    const auto& w = st.witness();
    out << "violation: " << verdict_name(st.verdict) << "\n";
    out << "witness (" << w.size() << " steps):";
    for (TransId t : w) out << " " << sys->trans(t).id;
    out << "\n";
    auto states = replay(*sys, w);  // validates every step
    out << "witness replays to: " << label_string(*sys, states.back()) << "\n";
  }
  std::cout << out.str();
  if (!stats_out.empty()) {
    std::ofstream f(stats_out, std::ios::binary | std::ios::app);
    if (!f) {
      std::cerr << "error: cannot write '" << stats_out << "'\n";
      return kExitInputError;
    }
    f << format_stats_line(*sys, mode, st) << "\n";
  }
  if (st.verdict == Verdict::Deadlock || st.verdict == Verdict::SafetyViolation)
    return kExitViolation;
  if (st.verdict == Verdict::BudgetExceeded) return kExitBudget;
  return kExitOk;
}

int cmd_analyze(const std::string& file, const std::string& dump_sgs,
                const std::string& dump_deps) {
  auto sys = load_system(file, true);
  if (!sys) return kExitInputError;
  CraResult cra = build_local_sgs(*sys);
  if (!dump_sgs.empty()) {
    std::error_code ec;
    fs::create_directories(dump_sgs, ec);
    for (ProcId p = 0; p < sys->processes.size(); ++p) {
      fs::path path = fs::path(dump_sgs) / (sys->processes[p].name + ".sg");
      std::ofstream f(path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return kExitInputError;
      }
      f << dump_sg(*sys, cra.sgs[p]);
    }
  }
  if (!dump_deps.empty()) {
    DependenceOracle oracle = build_oracle(*sys, cra.sgs);
    std::ofstream f(dump_deps, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << dump_deps << "'\n";
      return kExitInputError;
    }
    f << dump_dependence(*sys, oracle);
  }
  std::cout << "analyzed " << sys->name << ": " << cra.iterations << " iterations, "
            << cra.log.size() << " constraints\n";
  return kExitOk;
}

int cmd_bench(const std::string& family, const std::vector<int>& sizes,
              const std::vector<std::string>& modes, uint64_t budget, const std::string& out_path) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"family", "size"};
  for (const auto& m : modes) {
    header.push_back(m + "_time_ms");
    header.push_back(m + "_states");
  }
  rows.push_back(header);

  for (int n : sizes) {
    std::string text;
    try {
      if (family == "fifo")
        text = gen_fifo(n);
      else if (family == "arb")
        text = gen_arbiter(n);
      else if (family == "dme")
        text = gen_dme(n);
      else {
        std::cerr << "error: unknown family '" << family << "'\n";
        return kExitInputError;
      }
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInputError;
    }
    ParseResult r = parse_system(text);
    if (!r.ok()) {
      std::cerr << "error: generated model failed to parse\n";
      return kExitInputError;
    }
    std::vector<std::string> row{family, std::to_string(n)};
    for (const auto& m : modes) {
      SearchOptions so;
      so.max_states = budget;
      SearchStats st = run_mode(*r.system, m, so);
      if (st.budget_exceeded) {
        row.push_back("-");
        row.push_back("-");
      } else {
        row.push_back(std::to_string(static_cast<int64_t>(st.time_ms)));
        row.push_back(std::to_string(st.states));
      }
    }
    rows.push_back(std::move(row));
  }

  // Aligned columns.
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      if (c + 1 < row.size()) os << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << "\n";
  }
  std::cout << os.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitInputError;
    }
    f << os.str();
  }
  return kExitOk;
}

int cmd_gen(const std::string& family, int n, uint64_t seed, bool bug, const std::string& out_path) {
  std::string text;
  try {
    if (family == "fifo")
      text = gen_fifo(n);
    else if (family == "arb")
      text = gen_arbiter(n, bug);
    else if (family == "dme")
      text = gen_dme(n, bug);
    else if (family == "random")
      text = gen_random(seed);
    else {
      std::cerr << "error: unknown family '" << family << "'\n";
      return kExitInputError;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitInputError;
    }
    f << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"porlock: explicit-state model checker with local-state-graph-assisted POR"};
  app.require_subcommand(1);

  // check
  std::string file, mode = "por-cond", stats_out;
  bool safety_on = true;
  bool exhaustive = false;
  uint64_t budget = 10'000'000;
  auto* check = app.add_subcommand("check", "verify deadlock-freedom and safety");
  check->add_option("file", file)->required();
  check->add_option("--mode", mode)->check(CLI::IsMember({"mono", "por", "por-cond"}));
  check->add_option("--safety", safety_on, "evaluate the safety predicate (on|off)")
      ->transform(CLI::IsMember(std::map<std::string, bool>{{"on", true}, {"off", false}}));
  check->add_option("--budget", budget, "state budget");
  check->add_option("--stats-out", stats_out, "append the stats line to this file");
  check->add_flag("--exhaustive", exhaustive, "do not stop at the first violation");

  // analyze
  std::string dump_sgs_dir, dump_deps_path;
  auto* analyze = app.add_subcommand("analyze", "dump local state graphs and dependence relations");
  analyze->add_option("file", file)->required();
  analyze->add_option("--dump-sgs", dump_sgs_dir, "directory for per-process sg dumps");
  analyze->add_option("--dump-deps", dump_deps_path, "path for the dependence dump");

  // bench
  std::string family = "fifo", bench_out;
  std::vector<int> sizes;
  std::vector<std::string> modes{"mono", "por", "por-cond"};
  uint64_t bench_budget = 1'000'000;
  auto* bench = app.add_subcommand("bench", "run benchmark families and tabulate results");
  bench->add_option("--family", family)->check(CLI::IsMember({"fifo", "arb", "dme"}));
  bench->add_option("--sizes", sizes)->delimiter(',');
  bench->add_option("--modes", modes)->delimiter(',');
  bench->add_option("--budget", bench_budget);
  bench->add_option("--out", bench_out);

  // gen
  std::string gen_family = "random", gen_out;
  int gen_n = 3;
  bool gen_bug = false;
  uint64_t gen_seed = 0;
  bool seed_given = false;
  auto* gen = app.add_subcommand("gen", "emit a benchmark model as .pnet text");
  gen->add_option("--family", gen_family)->check(CLI::IsMember({"fifo", "arb", "dme", "random"}));
  gen->add_option("--n", gen_n, "family size");
  gen->add_option("--seed", gen_seed)->each([&](const std::string&) { seed_given = true; });
  gen->add_flag("--bug", gen_bug, "inject the known bug variant");
  gen->add_option("--out", gen_out);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(file, mode, safety_on, budget, stats_out, exhaustive);
  if (analyze->parsed()) return cmd_analyze(file, dump_sgs_dir, dump_deps_path);
  if (bench->parsed()) return cmd_bench(family, sizes, modes, bench_budget, bench_out);
  if (gen->parsed()) {
    if (!seed_given) {
      if (const char* env = std::getenv("PORLOCK_SEED")) gen_seed = std::strtoull(env, nullptr, 10);
    }
    return cmd_gen(gen_family, gen_n, gen_seed, gen_bug, gen_out);
  }
  return kExitInputError;
}
