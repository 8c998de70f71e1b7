#pragma once

#include <string>
#include <vector>

#include "porlock/dependence.hpp"
#include "porlock/model.hpp"

namespace porlock {

// sg-dump format, one file per state graph:
//   sg <process> states=<k> init=<id>
//   state <id> fail=<0|1> {var=val,...}     (sorted by id; vars by name)
//   edge <src> <tid|env> <dst>              (sorted)
std::string dump_sg(const SystemDef& sys, const StateGraph& g);

// Dependence dump: `dep t1 t2` lines (t1 < t2, sorted), then
// `depc <sg>:<state> <t>` lines, sorted.
std::string dump_dependence(const SystemDef& sys, const DependenceOracle& oracle);

}  // namespace porlock
