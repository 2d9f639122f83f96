#pragma once

// Concrete syntax, resolution and desugaring of modules, expressions, and
// evaluation frames.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sysgame/nominal.hpp"
#include "sysgame/value.hpp"

namespace sysgame {

enum class BinOp : std::uint8_t { Add, Sub, Eq, Lt, Assign, Seq };

const char* binop_symbol(BinOp op);

struct ExpNode;
using Exp = std::shared_ptr<const ExpNode>;

/// Expression tree. Source trees use Ident; resolved trees use Var (for
/// parameters and locals) and Val (for global names and runtime values).
struct ExpNode {
  enum class Kind : std::uint8_t {
    Val,    // value literal: integer, name, unit or flat tuple
    Ident,  // unresolved identifier
    Var,    // bound variable (parameter or local)
    Deref,  // *e
    Bin,    // e op e, including assignment and sequencing
    If,     // if (e) then e else e
    Call,   // e(e)
    Tuple,  // (e, e)
    New,    // new()
    Local,  // local x (binds x in the rest of the enclosing sequence)
  };

  Kind kind;
  BinOp op = BinOp::Add;
  Value val;
  std::string ident;  // Ident, Var, Local: source identifier
  int var = -1;       // Var, Local: resolved variable id
  std::vector<Exp> kids;
  int line = 0;
  int col = 0;
};

namespace ex {
Exp val(Value v);
Exp integer(std::int64_t n);
Exp name(const Name& a);
Exp unit();
Exp ident(std::string id, int line = 0, int col = 0);
Exp var(std::string id, int var);
Exp deref(Exp e);
Exp bin(BinOp op, Exp a, Exp b);
Exp seq(Exp a, Exp b);
Exp assign(Exp a, Exp b);
Exp cond(Exp c, Exp a, Exp b);
Exp call(Exp f, Exp arg);
Exp tuple(Exp a, Exp b);
Exp new_loc();
Exp local(std::string id, int var);
}  // namespace ex

bool is_value(const Exp& e);
bool exp_equal(const Exp& a, const Exp& b);
std::string render(const Exp& e);
NameSet support(const Exp& e);
Exp apply_perm(const Permutation& pi, const Exp& e);
/// Replaces every Var with id `var` by the value `v`.
Exp substitute(const Exp& e, int var, const Value& v);
/// Calls `visit` for each name occurrence in left-to-right order.
void visit_names(const Exp& e, const std::function<void(const Name&)>& visit);

/// One evaluation frame; the hole is where the next value is plugged.
struct Frame {
  enum class Kind : std::uint8_t {
    If,     // if (□) then {e1} else {e2}
    BinL,   // □ op e
    BinR,   // v op □
    Deref,  // *□
    AppL,   // □ e
    AppR,   // v □
    TupL,   // (□, e)
    TupR,   // (v, □)
  };
  Kind kind;
  BinOp op = BinOp::Add;
  Exp e1, e2;
  Value v;

  static Frame cond(Exp a, Exp b) { return {Kind::If, BinOp::Add, std::move(a), std::move(b), {}}; }
  static Frame bin_left(BinOp op, Exp e) { return {Kind::BinL, op, std::move(e), nullptr, {}}; }
  static Frame bin_right(Value v, BinOp op) { return {Kind::BinR, op, nullptr, nullptr, std::move(v)}; }
  static Frame deref() { return {Kind::Deref, BinOp::Add, nullptr, nullptr, {}}; }
  static Frame app_left(Exp e) { return {Kind::AppL, BinOp::Add, std::move(e), nullptr, {}}; }
  static Frame app_right(Value f) { return {Kind::AppR, BinOp::Add, nullptr, nullptr, std::move(f)}; }
  static Frame tup_left(Exp e) { return {Kind::TupL, BinOp::Add, std::move(e), nullptr, {}}; }
  static Frame tup_right(Value v) { return {Kind::TupR, BinOp::Add, nullptr, nullptr, std::move(v)}; }
};

/// Frames from outermost (front) to innermost (back).
using FrameStack = std::vector<Frame>;

bool frame_equal(const Frame& a, const Frame& b);
bool frames_equal(const FrameStack& a, const FrameStack& b);
std::string render(const Frame& f);
std::string render(const FrameStack& t);
NameSet support(const FrameStack& t);
FrameStack apply_perm(const Permutation& pi, const FrameStack& t);
void visit_names(const FrameStack& t, const std::function<void(const Name&)>& visit);

// ---------------------------------------------------------------------------
// Source modules

struct SourcePos {
  int line = 0;
  int col = 0;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, SourcePos pos)
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg),
        pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class ResolveError : public std::runtime_error {
 public:
  enum class Kind { UnboundIdentifier, ExportClash, SortClash };
  ResolveError(Kind kind, const std::string& ident, SourcePos pos, const std::string& msg)
      : std::runtime_error(msg), kind_(kind), ident_(ident), pos_(pos) {}
  Kind kind() const { return kind_; }
  const std::string& ident() const { return ident_; }
  SourcePos pos() const { return pos_; }

 private:
  Kind kind_;
  std::string ident_;
  SourcePos pos_;
};

struct VarDecl {
  std::string id;
  std::int64_t init = 0;
  SourcePos pos;
};

struct FuncDecl {
  std::string id;
  std::vector<std::string> params;
  std::vector<std::string> locals;
  Exp body;  // statements and result, as a source expression
  SourcePos pos;
};

struct SourceModule {
  std::vector<std::string> exports;
  std::vector<std::string> imports;
  std::vector<VarDecl> vars;
  std::vector<FuncDecl> funcs;
  /// Declaration order as (is_function, index into vars/funcs).
  std::vector<std::pair<bool, std::size_t>> order;

  bool declares(const std::string& id) const;
  bool declares_function(const std::string& id) const;
  std::vector<std::string> declared() const;
};

SourceModule parse_module(const std::string& text);
std::string print_module(const SourceModule& m);

/// Binds global identifiers (exports and imports) to names shared across
/// every module resolved against the same table, and keeps all allocated
/// names disjoint.
class SymbolTable {
 public:
  Name global(const std::string& id, Sort sort, SourcePos pos = {});
  Name allocate(Sort sort);
  std::optional<Name> find(const std::string& id) const;
  /// Records names that must never be allocated (e.g. names of other states).
  void reserve(const NameSet& names) { used_.insert_all(names); }
  const NameSet& used() const { return used_; }

 private:
  std::map<std::string, Name> globals_;
  NameSet used_;
};

struct FunctionDef {
  std::vector<int> params;
  std::vector<std::string> param_ids;
  Exp body;
};

struct ResolvedModule {
  NameSet exports;
  NameSet imports;
  NameSet declared;
  std::map<Name, Value> init_store;  // declared variables and their initializers
  std::map<Name, FunctionDef> defs;
  std::map<Name, std::string> ident_of;  // for diagnostics and pretty output

  /// exports ∪ imports ∪ declared: names fixed by the module text.
  NameSet static_names() const { return exports | imports | declared; }
  std::string label(const Name& n) const;
};

ResolvedModule resolve_and_desugar(const SourceModule& m, SymbolTable& table);
/// Resolves against a private symbol table.
ResolvedModule resolve_and_desugar(const SourceModule& m);

/// Some iff f is declared in m. Throws std::invalid_argument if f is not
/// function-sorted.
const FunctionDef* lookup_def(const Name& f, const ResolvedModule& m);

/// M1·M2: concatenation with private identifiers renamed apart.
SourceModule syntactic_compose(const SourceModule& m1, const SourceModule& m2);

/// Resolved-level counterpart of syntactic composition for two modules
/// resolved against the same symbol table.
ResolvedModule link(const ResolvedModule& m1, const ResolvedModule& m2);

}  // namespace sysgame
