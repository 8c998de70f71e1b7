#include "porlock/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace porlock {

std::string ParseDiagnostic::render() const {
  std::ostringstream os;
  os << (severity == Severity::Error ? "error" : "warning") << " at " << line << ":" << column
     << ": " << message;
  if (!token.empty()) os << " (near '" << token << "')";
  return os.str();
}

bool ParseResult::has_errors() const {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return true;
  return false;
}

namespace {

enum class Tok {
  Ident, Int, Plus, Minus, Colon, Semi, Comma, LBrace, RBrace, LParen, RParen,
  DotDot, Assign, Arrow, EqEq, Ne, Lt, Gt, AndAnd, OrOr, Eq, End, Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = s_.substr(start, pos_ - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
      t.kind = Tok::Int;
      t.text = s_.substr(start, pos_ - start);
      t.value = std::stoll(t.text);
      return t;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
    };
    if (two('.', '.')) { advance(); advance(); t.kind = Tok::DotDot; t.text = ".."; return t; }
    if (two(':', '=')) { advance(); advance(); t.kind = Tok::Assign; t.text = ":="; return t; }
    if (two('-', '>')) { advance(); advance(); t.kind = Tok::Arrow; t.text = "->"; return t; }
    if (two('=', '=')) { advance(); advance(); t.kind = Tok::EqEq; t.text = "=="; return t; }
    if (two('!', '=')) { advance(); advance(); t.kind = Tok::Ne; t.text = "!="; return t; }
    if (two('&', '&')) { advance(); advance(); t.kind = Tok::AndAnd; t.text = "&&"; return t; }
    if (two('|', '|')) { advance(); advance(); t.kind = Tok::OrOr; t.text = "||"; return t; }
    advance();
    switch (c) {
      case '+': t.kind = Tok::Plus; t.text = "+"; return t;
      case '-': t.kind = Tok::Minus; t.text = "-"; return t;
      case ':': t.kind = Tok::Colon; t.text = ":"; return t;
      case ';': t.kind = Tok::Semi; t.text = ";"; return t;
      case ',': t.kind = Tok::Comma; t.text = ","; return t;
      case '{': t.kind = Tok::LBrace; t.text = "{"; return t;
      case '}': t.kind = Tok::RBrace; t.text = "}"; return t;
      case '(': t.kind = Tok::LParen; t.text = "("; return t;
      case ')': t.kind = Tok::RParen; t.text = ")"; return t;
      case '<': t.kind = Tok::Lt; t.text = "<"; return t;
      case '>': t.kind = Tok::Gt; t.text = ">"; return t;
      case '=': t.kind = Tok::Eq; t.text = "="; return t;
      default:
        t.kind = Tok::Bad;
        t.text = std::string(1, c);
        return t;
    }
  }

  // True when the character right at the cursor is `c` (no whitespace skip);
  // used to glue the +/- suffix of transition labels.
  bool peek_raw(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  void consume_raw() { advance(); }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Pre-validation parse tree, close to the surface syntax.
struct RawDecl {
  std::string name;
  long long lo, hi, init;
  int line, col;
};
struct RawCmpExpr {
  BoolExpr expr;  // with VarId fields holding placeholder 0; names kept aside
};
struct RawCmp {
  std::string var;
  CmpOp op;
  long long k;
  int line, col;
};
struct RawExpr {
  enum class Kind { Cmp, And, Or } kind = Kind::Cmp;
  RawCmp cmp{};
  std::vector<RawExpr> children;
};
struct RawAssign {
  std::string var;
  enum class Kind { Set, Inc, Dec } kind;
  long long k;
  int line, col;
};
struct RawTrans {
  std::string id;
  bool sugar = false;   // bare `trans name+;` / `trans name-;`
  bool plus = false;    // sugar direction
  std::string sugar_var;
  std::vector<RawCmp> guard;
  std::vector<RawAssign> effects;
  int line, col;
};
struct RawProcess {
  std::string name;
  std::vector<RawDecl> vars;
  std::optional<RawExpr> fail_when;
  std::vector<RawTrans> transitions;
  int line, col;
};
struct RawSystem {
  std::string name;
  std::vector<RawDecl> shared;
  std::vector<RawProcess> processes;
  std::optional<RawExpr> safety;
};

class Parser {
 public:
  Parser(const std::string& text, std::vector<ParseDiagnostic>& diags)
      : lex_(text), diags_(diags) {
    cur_ = lex_.next();
  }

  bool parse(RawSystem& out) {
    if (!expect_keyword("system")) return false;
    if (!expect(Tok::Ident, "system name")) return false;
    out.name = cur_.text;
    bump();
    if (!expect(Tok::Semi, "';'")) return false;
    bump();
    while (at_keyword("shared")) {
      bump();
      RawDecl d;
      if (!parse_decl(d)) return false;
      out.shared.push_back(d);
      if (!expect(Tok::Semi, "';'")) return false;
      bump();
    }
    while (at_keyword("process")) {
      RawProcess p;
      if (!parse_process(p)) return false;
      out.processes.push_back(std::move(p));
    }
    if (at_keyword("safety")) {
      bump();
      RawExpr e;
      if (!parse_expr(e)) return false;
      out.safety = std::move(e);
      if (!expect(Tok::Semi, "';'")) return false;
      bump();
    }
    if (cur_.kind != Tok::End) {
      error("unexpected trailing input");
      return false;
    }
    return true;
  }

 private:
  bool parse_decl(RawDecl& d) {
    if (!expect(Tok::Ident, "variable name")) return false;
    d.name = cur_.text;
    d.line = cur_.line;
    d.col = cur_.col;
    bump();
    if (!expect(Tok::Colon, "':'")) return false;
    bump();
    if (!parse_int(d.lo)) return false;
    if (!expect(Tok::DotDot, "'..'")) return false;
    bump();
    if (!parse_int(d.hi)) return false;
    if (!expect(Tok::Eq, "'='")) return false;
    bump();
    if (!parse_int(d.init)) return false;
    return true;
  }

  bool parse_int(long long& v) {
    bool neg = false;
    if (cur_.kind == Tok::Minus) {
      neg = true;
      bump();
    }
    if (!expect(Tok::Int, "integer")) return false;
    v = neg ? -cur_.value : cur_.value;
    bump();
    return true;
  }

  bool parse_process(RawProcess& p) {
    p.line = cur_.line;
    p.col = cur_.col;
    bump();  // 'process'
    if (!expect(Tok::Ident, "process name")) return false;
    p.name = cur_.text;
    bump();
    if (!expect(Tok::LBrace, "'{'")) return false;
    bump();
    while (at_keyword("var")) {
      bump();
      RawDecl d;
      if (!parse_decl(d)) return false;
      p.vars.push_back(d);
      if (!expect(Tok::Semi, "';'")) return false;
      bump();
    }
    if (at_keyword("fail")) {
      bump();
      if (!expect_keyword("when")) return false;
      RawExpr e;
      if (!parse_expr(e)) return false;
      p.fail_when = std::move(e);
      if (!expect(Tok::Semi, "';'")) return false;
      bump();
    }
    while (at_keyword("trans")) {
      RawTrans t;
      if (!parse_trans(t)) return false;
      p.transitions.push_back(std::move(t));
    }
    if (!expect(Tok::RBrace, "'}'")) return false;
    bump();
    return true;
  }

  bool parse_trans(RawTrans& t) {
    t.line = cur_.line;
    t.col = cur_.col;
    bump();  // 'trans'
    if (!expect(Tok::Ident, "transition id")) return false;
    t.id = cur_.text;
    t.sugar_var = cur_.text;
    // Glue an immediately following '+'/'-' into the id (a+ / a- labels).
    bool plus = lex_.peek_raw('+');
    bool minus = lex_.peek_raw('-');
    bump_glued(plus || minus);
    if (plus || minus) {
      t.id += plus ? "+" : "-";
      t.plus = plus;
      t.sugar = true;  // provisional; body below overrides
    }
    if (cur_.kind == Tok::Semi) {
      if (!t.sugar) {
        error("transition '" + t.id + "' has no body and is not a '+'/'-' toggle");
        return false;
      }
      bump();
      return true;
    }
    t.sugar = false;
    if (!expect(Tok::Colon, "':' or ';'")) return false;
    bump();
    if (!expect_keyword("guard")) return false;
    RawExpr g;
    if (!parse_expr(g)) return false;
    if (!flatten_conjunction(g, t.guard)) {
      error("transition guard must be a conjunction of comparisons");
      return false;
    }
    if (!expect(Tok::Arrow, "'->'")) return false;
    bump();
    while (true) {
      RawAssign a;
      if (!parse_assign(a)) return false;
      t.effects.push_back(a);
      if (cur_.kind == Tok::Comma) {
        bump();
        continue;
      }
      break;
    }
    if (!expect(Tok::Semi, "';'")) return false;
    bump();
    return true;
  }

  bool parse_assign(RawAssign& a) {
    if (!expect(Tok::Ident, "variable name")) return false;
    a.var = cur_.text;
    a.line = cur_.line;
    a.col = cur_.col;
    bump();
    if (!expect(Tok::Assign, "':='")) return false;
    bump();
    if (cur_.kind == Tok::Ident) {
      if (cur_.text != a.var) {
        error("increment/decrement must reference the assigned variable", cur_.text);
        return false;
      }
      bump();
      if (cur_.kind == Tok::Plus) {
        a.kind = RawAssign::Kind::Inc;
      } else if (cur_.kind == Tok::Minus) {
        a.kind = RawAssign::Kind::Dec;
      } else {
        error("expected '+ 1' or '- 1'");
        return false;
      }
      bump();
      if (cur_.kind != Tok::Int || cur_.value != 1) {
        error("only steps of 1 are supported");
        return false;
      }
      bump();
      return true;
    }
    a.kind = RawAssign::Kind::Set;
    return parse_int(a.k);
  }

  // expr := and ('||' and)* ; and := atom ('&&' atom)* ; atom := '(' expr ')' | cmp
  bool parse_expr(RawExpr& e) {
    RawExpr first;
    if (!parse_and(first)) return false;
    if (cur_.kind != Tok::OrOr) {
      e = std::move(first);
      return true;
    }
    e.kind = RawExpr::Kind::Or;
    e.children.push_back(std::move(first));
    while (cur_.kind == Tok::OrOr) {
      bump();
      RawExpr next;
      if (!parse_and(next)) return false;
      if (next.kind == RawExpr::Kind::Or)
        for (auto& c : next.children) e.children.push_back(std::move(c));
      else
        e.children.push_back(std::move(next));
    }
    return true;
  }

  bool parse_and(RawExpr& e) {
    RawExpr first;
    if (!parse_atom(first)) return false;
    if (cur_.kind != Tok::AndAnd) {
      e = std::move(first);
      return true;
    }
    e.kind = RawExpr::Kind::And;
    e.children.push_back(std::move(first));
    while (cur_.kind == Tok::AndAnd) {
      bump();
      RawExpr next;
      if (!parse_atom(next)) return false;
      if (next.kind == RawExpr::Kind::And)
        for (auto& c : next.children) e.children.push_back(std::move(c));
      else
        e.children.push_back(std::move(next));
    }
    return true;
  }

  bool parse_atom(RawExpr& e) {
    if (cur_.kind == Tok::LParen) {
      bump();
      if (!parse_expr(e)) return false;
      if (!expect(Tok::RParen, "')'")) return false;
      bump();
      return true;
    }
    if (!expect(Tok::Ident, "comparison")) return false;
    e.kind = RawExpr::Kind::Cmp;
    e.cmp.var = cur_.text;
    e.cmp.line = cur_.line;
    e.cmp.col = cur_.col;
    bump();
    switch (cur_.kind) {
      case Tok::EqEq: e.cmp.op = CmpOp::Eq; break;
      case Tok::Ne: e.cmp.op = CmpOp::Ne; break;
      case Tok::Lt: e.cmp.op = CmpOp::Lt; break;
      case Tok::Gt: e.cmp.op = CmpOp::Gt; break;
      default:
        error("expected comparison operator");
        return false;
    }
    bump();
    return parse_int(e.cmp.k);
  }

  static bool flatten_conjunction(const RawExpr& e, std::vector<RawCmp>& out) {
    if (e.kind == RawExpr::Kind::Cmp) {
      out.push_back(e.cmp);
      return true;
    }
    if (e.kind != RawExpr::Kind::And) return false;
    for (const auto& c : e.children) {
      if (c.kind != RawExpr::Kind::Cmp) return false;
      out.push_back(c.cmp);
    }
    return true;
  }

  bool at_keyword(const char* kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }
  bool expect_keyword(const char* kw) {
    if (!at_keyword(kw)) {
      error(std::string("expected '") + kw + "'");
      return false;
    }
    bump();
    return true;
  }
  bool expect(Tok k, const char* what) {
    if (cur_.kind != k) {
      error(std::string("expected ") + what);
      return false;
    }
    return true;
  }
  void bump() { cur_ = lex_.next(); }
  void bump_glued(bool sign) {
    if (sign) lex_.consume_raw();
    cur_ = lex_.next();
  }
  void error(const std::string& msg, const std::string& tok = "") {
    diags_.push_back(ParseDiagnostic{Severity::Error, cur_.line, cur_.col, msg,
                                     tok.empty() ? cur_.text : tok});
  }

  Lexer lex_;
  Token cur_;
  std::vector<ParseDiagnostic>& diags_;
};

// --- Name resolution and validation ---------------------------------------

struct Resolver {
  const RawSystem& raw;
  std::vector<ParseDiagnostic>& diags;
  SystemDef sys;
  std::map<std::string, VarId> var_ids;
  bool failed = false;

  void error(int line, int col, const std::string& msg, const std::string& tok = "") {
    diags.push_back(ParseDiagnostic{Severity::Error, line, col, msg, tok});
    failed = true;
  }
  void warn(int line, int col, const std::string& msg, const std::string& tok = "") {
    diags.push_back(ParseDiagnostic{Severity::Warning, line, col, msg, tok});
  }

  void declare(const RawDecl& d, VarKind kind, ProcId owner) {
    if (var_ids.count(d.name)) {
      error(d.line, d.col, "duplicate variable name '" + d.name + "'", d.name);
      return;
    }
    if (d.lo > d.hi) {
      error(d.line, d.col, "empty domain for '" + d.name + "'", d.name);
      return;
    }
    if (d.init < d.lo || d.init > d.hi) {
      error(d.line, d.col, "initial value of '" + d.name + "' outside its domain", d.name);
      return;
    }
    VariableDecl v;
    v.name = d.name;
    v.lo = static_cast<Value>(d.lo);
    v.hi = static_cast<Value>(d.hi);
    v.init = static_cast<Value>(d.init);
    v.kind = kind;
    v.owner = owner;
    var_ids[d.name] = static_cast<VarId>(sys.vars.size());
    sys.vars.push_back(v);
  }

  std::optional<VarId> lookup(const std::string& name, int line, int col) {
    auto it = var_ids.find(name);
    if (it == var_ids.end()) {
      error(line, col, "undeclared variable '" + name + "'", name);
      return std::nullopt;
    }
    return it->second;
  }

  // A variable is usable by process p if it is p's local or a shared variable.
  bool usable(VarId v, ProcId p, int line, int col, const std::string& name) {
    const auto& d = sys.vars[v];
    if (d.kind == VarKind::Shared) return true;
    if (d.owner == p) return true;
    error(line, col,
          "variable '" + name + "' is local to process '" + sys.processes[d.owner].name + "'",
          name);
    return false;
  }

  std::optional<BoolExpr> resolve_expr(const RawExpr& e, std::optional<ProcId> proc) {
    BoolExpr out;
    switch (e.kind) {
      case RawExpr::Kind::Cmp: {
        auto v = lookup(e.cmp.var, e.cmp.line, e.cmp.col);
        if (!v) return std::nullopt;
        if (proc && !usable(*v, *proc, e.cmp.line, e.cmp.col, e.cmp.var)) return std::nullopt;
        out.kind = BoolExpr::Kind::Cmp;
        out.cmp = Cmp{*v, e.cmp.op, static_cast<Value>(e.cmp.k)};
        return out;
      }
      case RawExpr::Kind::And: out.kind = BoolExpr::Kind::And; break;
      case RawExpr::Kind::Or: out.kind = BoolExpr::Kind::Or; break;
    }
    for (const auto& c : e.children) {
      auto r = resolve_expr(c, proc);
      if (!r) return std::nullopt;
      out.children.push_back(std::move(*r));
    }
    return out;
  }

  bool run() {
    sys.name = raw.name;
    // Variable ids are assigned in canonical order (shared sorted by name,
    // then each process's locals sorted by name) so that ids are independent
    // of declaration order and parse(print(s)) == s holds structurally.
    auto by_name = [](const RawDecl& a, const RawDecl& b) { return a.name < b.name; };
    std::vector<RawDecl> shared_sorted = raw.shared;
    std::stable_sort(shared_sorted.begin(), shared_sorted.end(), by_name);
    for (const auto& d : shared_sorted) declare(d, VarKind::Shared, 0);
    for (ProcId p = 0; p < raw.processes.size(); ++p) {
      const auto& rp = raw.processes[p];
      for (ProcId q = 0; q < p; ++q)
        if (raw.processes[q].name == rp.name)
          error(rp.line, rp.col, "duplicate process name '" + rp.name + "'", rp.name);
      std::vector<RawDecl> locals_sorted = rp.vars;
      std::stable_sort(locals_sorted.begin(), locals_sorted.end(), by_name);
      for (const auto& d : locals_sorted) declare(d, VarKind::Local, p);
    }
    if (failed) return false;

    struct PendingTrans {
      TransitionDef def;
      int line, col;
    };
    std::vector<PendingTrans> pending;
    std::set<std::string> tids;

    for (ProcId p = 0; p < raw.processes.size(); ++p) {
      const auto& rp = raw.processes[p];
      ProcessDef proc;
      proc.name = rp.name;
      for (const auto& d : rp.vars) proc.locals.push_back(var_ids[d.name]);
      std::sort(proc.locals.begin(), proc.locals.end());

      if (rp.fail_when) {
        auto e = resolve_expr(*rp.fail_when, p);
        if (e) proc.fail_when = std::move(*e);
      }

      for (const auto& rt : rp.transitions) {
        TransitionDef t;
        t.owner = p;
        t.id = rt.id;
        if (!tids.insert(rt.id).second) {
          error(rt.line, rt.col, "duplicate transition id '" + rt.id + "'", rt.id);
          continue;
        }
        if (rt.sugar) {
          auto v = lookup(rt.sugar_var, rt.line, rt.col);
          if (!v) continue;
          if (!usable(*v, p, rt.line, rt.col, rt.sugar_var)) continue;
          const auto& d = sys.vars[*v];
          if (d.lo != 0 || d.hi != 1)
            error(rt.line, rt.col, "'" + rt.id + "' toggle requires a 0..1 variable", rt.id);
          t.guard.push_back(Cmp{*v, CmpOp::Eq, rt.plus ? 0 : 1});
          t.effects.push_back(Effect{*v, EffectKind::Set, rt.plus ? 1 : 0});
        } else {
          bool ok = true;
          for (const auto& rc : rt.guard) {
            auto v = lookup(rc.var, rc.line, rc.col);
            if (!v || !usable(*v, p, rc.line, rc.col, rc.var)) {
              ok = false;
              continue;
            }
            t.guard.push_back(Cmp{*v, rc.op, static_cast<Value>(rc.k)});
          }
          std::set<VarId> written;
          for (const auto& ra : rt.effects) {
            auto v = lookup(ra.var, ra.line, ra.col);
            if (!v || !usable(*v, p, ra.line, ra.col, ra.var)) {
              ok = false;
              continue;
            }
            if (!written.insert(*v).second) {
              error(ra.line, ra.col,
                    "transition '" + rt.id + "' assigns '" + ra.var + "' more than once", ra.var);
              ok = false;
              continue;
            }
            Effect e;
            e.var = *v;
            switch (ra.kind) {
              case RawAssign::Kind::Set:
                e.kind = EffectKind::Set;
                e.k = static_cast<Value>(ra.k);
                if (e.k < sys.vars[*v].lo || e.k > sys.vars[*v].hi)
                  error(ra.line, ra.col,
                        "assignment drives '" + ra.var + "' outside its domain", ra.var);
                break;
              case RawAssign::Kind::Inc: e.kind = EffectKind::Inc; break;
              case RawAssign::Kind::Dec: e.kind = EffectKind::Dec; break;
            }
            t.effects.push_back(e);
          }
          if (!ok) continue;
        }
        pending.push_back(PendingTrans{std::move(t), rt.line, rt.col});
      }
      sys.processes.push_back(std::move(proc));
    }
    if (failed) return false;

    // Transitions are stored sorted by id; TransId order doubles as the
    // deterministic tie-break order everywhere.
    std::sort(pending.begin(), pending.end(),
              [](const PendingTrans& a, const PendingTrans& b) { return a.def.id < b.def.id; });
    for (const auto& pt : pending) {
      TransId id = static_cast<TransId>(sys.transitions.size());
      sys.processes[pt.def.owner].transitions.push_back(id);
      sys.transitions.push_back(pt.def);
    }

    if (raw.safety) {
      auto e = resolve_expr(*raw.safety, std::nullopt);
      if (e) sys.safety = std::move(*e);
    }
    if (failed) return false;

    // Visible set: locals plus shared variables the process actually touches.
    std::vector<std::set<VarId>> touched(sys.processes.size());
    for (const auto& t : sys.transitions) {
      for (const auto& c : t.guard) touched[t.owner].insert(c.var);
      for (const auto& e : t.effects) touched[t.owner].insert(e.var);
    }
    for (ProcId p = 0; p < sys.processes.size(); ++p) {
      if (sys.processes[p].fail_when) {
        std::vector<VarId> used;
        collect_expr_vars(*sys.processes[p].fail_when, used);
        for (VarId v : used) touched[p].insert(v);
      }
      std::set<VarId> vis(sys.processes[p].locals.begin(), sys.processes[p].locals.end());
      for (VarId v : touched[p]) vis.insert(v);
      sys.processes[p].visible.assign(vis.begin(), vis.end());
    }

    // Shared variables should be used by at least two processes.
    for (VarId v = 0; v < sys.vars.size(); ++v) {
      if (sys.vars[v].kind != VarKind::Shared) continue;
      int users = 0;
      for (ProcId p = 0; p < sys.processes.size(); ++p)
        if (touched[p].count(v)) ++users;
      if (users < 2)
        warn(1, 1, "shared variable '" + sys.vars[v].name + "' is used by " +
                       std::to_string(users) + " process(es)");
    }
    return !failed;
  }

  static void collect_expr_vars(const BoolExpr& e, std::vector<VarId>& into) {
    if (e.kind == BoolExpr::Kind::Cmp) {
      into.push_back(e.cmp.var);
      return;
    }
    for (const auto& c : e.children) collect_expr_vars(c, into);
  }
};

}  // namespace

ParseResult parse_system(const std::string& text) {
  ParseResult result;
  RawSystem raw;
  Parser parser(text, result.diagnostics);
  if (!parser.parse(raw)) return result;
  Resolver resolver{raw, result.diagnostics, {}, {}, false};
  if (!resolver.run()) return result;
  check_system(resolver.sys);
  result.system = std::move(resolver.sys);
  return result;
}

// --- Printing ---------------------------------------------------------------

namespace {

std::string print_cmp(const SystemDef& sys, const Cmp& c) {
  const char* op = "==";
  switch (c.op) {
    case CmpOp::Eq: op = "=="; break;
    case CmpOp::Ne: op = "!="; break;
    case CmpOp::Lt: op = "<"; break;
    case CmpOp::Gt: op = ">"; break;
  }
  return sys.var(c.var).name + " " + op + " " + std::to_string(c.k);
}

std::string print_expr_prec(const SystemDef& sys, const BoolExpr& e, bool parenthesize_or) {
  switch (e.kind) {
    case BoolExpr::Kind::Cmp:
      return print_cmp(sys, e.cmp);
    case BoolExpr::Kind::And: {
      std::string s;
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += " && ";
        s += print_expr_prec(sys, e.children[i], true);
      }
      return s;
    }
    case BoolExpr::Kind::Or: {
      std::string s;
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += " || ";
        s += print_expr_prec(sys, e.children[i], false);
      }
      return parenthesize_or ? "(" + s + ")" : s;
    }
  }
  return "";
}

std::string print_decl(const VariableDecl& v) {
  return v.name + " : " + std::to_string(v.lo) + ".." + std::to_string(v.hi) + " = " +
         std::to_string(v.init);
}

std::string print_effect(const SystemDef& sys, const Effect& e) {
  const std::string& n = sys.var(e.var).name;
  switch (e.kind) {
    case EffectKind::Set: return n + " := " + std::to_string(e.k);
    case EffectKind::Inc: return n + " := " + n + " + 1";
    case EffectKind::Dec: return n + " := " + n + " - 1";
  }
  return n;
}

}  // namespace

std::string print_expr(const SystemDef& sys, const BoolExpr& e) {
  return print_expr_prec(sys, e, false);
}

std::string print_guard(const SystemDef& sys, const std::vector<Cmp>& guard) {
  std::string s;
  for (size_t i = 0; i < guard.size(); ++i) {
    if (i) s += " && ";
    s += print_cmp(sys, guard[i]);
  }
  return s;
}

std::string print_system(const SystemDef& sys) {
  std::ostringstream os;
  os << "system " << sys.name << ";\n";

  std::vector<const VariableDecl*> shared;
  for (const auto& v : sys.vars)
    if (v.kind == VarKind::Shared) shared.push_back(&v);
  std::sort(shared.begin(), shared.end(),
            [](const VariableDecl* a, const VariableDecl* b) { return a->name < b->name; });
  if (!shared.empty()) os << "\n";
  for (const auto* v : shared) os << "shared " << print_decl(*v) << ";\n";

  for (const auto& p : sys.processes) {
    os << "\nprocess " << p.name << " {\n";
    std::vector<const VariableDecl*> locals;
    for (VarId v : p.locals) locals.push_back(&sys.var(v));
    std::sort(locals.begin(), locals.end(),
              [](const VariableDecl* a, const VariableDecl* b) { return a->name < b->name; });
    for (const auto* v : locals) os << "  var " << print_decl(*v) << ";\n";
    if (p.fail_when) os << "  fail when " << print_expr(sys, *p.fail_when) << ";\n";
    for (TransId t : p.transitions) {
      const auto& tr = sys.trans(t);
      os << "  trans " << tr.id << " : guard " << print_guard(sys, tr.guard) << " ->";
      for (size_t i = 0; i < tr.effects.size(); ++i)
        os << (i ? "," : "") << " " << print_effect(sys, tr.effects[i]);
      os << ";\n";
    }
    os << "}\n";
  }

  if (sys.safety) os << "\nsafety " << print_expr(sys, *sys.safety) << ";\n";
  return os.str();
}

}  // namespace porlock
