#pragma once

#include <string>
#include <vector>

#include "porlock/model.hpp"

namespace porlock {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  int line = 0;
  int column = 0;
  std::string message;
  std::string token;  // offending token, possibly empty

  std::string render() const;
};

struct ParseResult {
  std::optional<SystemDef> system;  // present iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return system.has_value(); }
  bool has_errors() const;
};

// Parses the .pnet process-network language. Total: malformed input yields
// diagnostics, never an exception.
ParseResult parse_system(const std::string& text);

// Canonical printer: two-space indent, LF line endings, declarations sorted
// by name. parse_system(print_system(s)) is structurally equal to s.
std::string print_system(const SystemDef& sys);

std::string print_expr(const SystemDef& sys, const BoolExpr& e);
std::string print_guard(const SystemDef& sys, const std::vector<Cmp>& guard);

}  // namespace porlock
