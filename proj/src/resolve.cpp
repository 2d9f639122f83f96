#include <set>

#include "sysgame/syntax.hpp"

namespace sysgame {

Name SymbolTable::global(const std::string& id, Sort sort, SourcePos pos) {
  auto it = globals_.find(id);
  if (it != globals_.end()) {
    if (it->second.sort != sort)
      throw ResolveError(ResolveError::Kind::SortClash, id, pos,
                         std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": identifier '" + id +
                             "' is bound to " + it->second.str() + " with a different sort");
    return it->second;
  }
  Name n = allocate(sort);
  globals_.emplace(id, n);
  return n;
}

Name SymbolTable::allocate(Sort sort) {
  Name n = fresh(sort, used_);
  used_.insert(n);
  return n;
}

std::optional<Name> SymbolTable::find(const std::string& id) const {
  auto it = globals_.find(id);
  if (it == globals_.end()) return std::nullopt;
  return it->second;
}

std::string ResolvedModule::label(const Name& n) const {
  auto it = ident_of.find(n);
  return it == ident_of.end() ? n.str() : it->second;
}

namespace {

void collect_location_uses(const Exp& e, std::set<std::string>& out) {
  if (e->kind == ExpNode::Kind::Deref && e->kids[0]->kind == ExpNode::Kind::Ident) out.insert(e->kids[0]->ident);
  if (e->kind == ExpNode::Kind::Bin && e->op == BinOp::Assign && e->kids[0]->kind == ExpNode::Kind::Ident)
    out.insert(e->kids[0]->ident);
  for (const auto& k : e->kids) collect_location_uses(k, out);
}

class Resolver {
 public:
  Resolver(const SourceModule& m, SymbolTable& table) : m_(m), table_(table) {}

  ResolvedModule run() {
    std::set<std::string> location_uses;
    for (const auto& f : m_.funcs) collect_location_uses(f.body, location_uses);

    for (const auto& id : m_.exports) bind(id, table_.global(id, declared_sort(id), {}), true);
    for (const auto& id : m_.imports) {
      Sort sort = Sort::Function;
      if (auto prior = table_.find(id)) sort = prior->sort;
      else if (location_uses.count(id)) sort = Sort::Location;
      Name n = table_.global(id, sort, {});
      bind(id, n, false);
      out_.imports.insert(n);
    }
    for (const auto& id : m_.declared()) {
      if (globals_.count(id)) continue;
      bind(id, table_.allocate(declared_sort(id)), false);
    }
    for (const auto& v : m_.vars) out_.init_store[globals_.at(v.id)] = Value::integer(v.init);
    for (const auto& f : m_.funcs) out_.defs[globals_.at(f.id)] = function(f);
    return out_;
  }

 private:
  Sort declared_sort(const std::string& id) const {
    return m_.declares_function(id) ? Sort::Function : Sort::Location;
  }

  void bind(const std::string& id, const Name& n, bool exported) {
    globals_[id] = n;
    out_.ident_of[n] = id;
    if (exported) out_.exports.insert(n);
    if (m_.declares(id)) out_.declared.insert(n);
  }

  FunctionDef function(const FuncDecl& f) {
    FunctionDef def;
    std::map<std::string, int> scope;
    for (const auto& p : f.params) {
      int v = next_var_++;
      scope[p] = v;
      def.params.push_back(v);
      def.param_ids.push_back(p);
    }
    std::vector<std::pair<std::string, int>> locals;
    for (const auto& l : f.locals) {
      int v = next_var_++;
      scope[l] = v;
      locals.emplace_back(l, v);
    }
    Exp body = expression(f.body, scope);
    for (auto it = locals.rbegin(); it != locals.rend(); ++it) body = ex::seq(ex::local(it->first, it->second), body);
    def.body = body;
    return def;
  }

  Exp expression(const Exp& e, const std::map<std::string, int>& scope) {
    if (e->kind == ExpNode::Kind::Ident) {
      if (auto it = scope.find(e->ident); it != scope.end()) return ex::var(e->ident, it->second);
      if (auto it = globals_.find(e->ident); it != globals_.end()) return ex::name(it->second);
      SourcePos pos{e->line, e->col};
      throw ResolveError(ResolveError::Kind::UnboundIdentifier, e->ident, pos,
                         std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": unbound identifier '" +
                             e->ident + "'");
    }
    if (e->kids.empty()) return e;
    auto copy = std::make_shared<ExpNode>(*e);
    for (auto& k : copy->kids) k = expression(k, scope);
    return copy;
  }

  const SourceModule& m_;
  SymbolTable& table_;
  ResolvedModule out_;
  std::map<std::string, Name> globals_;
  int next_var_ = 0;
};

// Renames free occurrences of identifiers in `renames`, respecting shadowing
// by parameters and locals.
Exp rename_free(const Exp& e, const std::map<std::string, std::string>& renames) {
  if (e->kind == ExpNode::Kind::Ident) {
    auto it = renames.find(e->ident);
    if (it == renames.end()) return e;
    return ex::ident(it->second, e->line, e->col);
  }
  if (e->kids.empty()) return e;
  auto copy = std::make_shared<ExpNode>(*e);
  for (auto& k : copy->kids) k = rename_free(k, renames);
  return copy;
}

SourceModule rename_module(const SourceModule& m, const std::map<std::string, std::string>& renames) {
  SourceModule out = m;
  for (auto& v : out.vars)
    if (auto it = renames.find(v.id); it != renames.end()) v.id = it->second;
  for (auto& f : out.funcs) {
    if (auto it = renames.find(f.id); it != renames.end()) f.id = it->second;
    auto scoped = renames;
    for (const auto& p : f.params) scoped.erase(p);
    for (const auto& l : f.locals) scoped.erase(l);
    f.body = rename_free(f.body, scoped);
  }
  return out;
}

void collect_idents(const Exp& e, std::set<std::string>& out) {
  if (e->kind == ExpNode::Kind::Ident) out.insert(e->ident);
  for (const auto& k : e->kids) collect_idents(k, out);
}

std::set<std::string> all_idents(const SourceModule& m) {
  std::set<std::string> out(m.exports.begin(), m.exports.end());
  out.insert(m.imports.begin(), m.imports.end());
  for (const auto& id : m.declared()) out.insert(id);
  for (const auto& f : m.funcs) {
    out.insert(f.params.begin(), f.params.end());
    out.insert(f.locals.begin(), f.locals.end());
    collect_idents(f.body, out);
  }
  return out;
}

// Private declarations of `m` clashing with any identifier of `other` get a
// name unused by both modules.
SourceModule rename_apart(const SourceModule& m, const std::set<std::string>& other,
                          std::set<std::string>& taken) {
  std::set<std::string> header(m.exports.begin(), m.exports.end());
  header.insert(m.imports.begin(), m.imports.end());
  std::map<std::string, std::string> renames;
  for (const auto& id : m.declared()) {
    if (header.count(id) || !other.count(id)) continue;
    std::string candidate;
    for (int i = 1;; ++i) {
      candidate = id + "_" + std::to_string(i);
      if (!taken.count(candidate)) break;
    }
    taken.insert(candidate);
    renames[id] = candidate;
  }
  return renames.empty() ? m : rename_module(m, renames);
}

}  // namespace

ResolvedModule resolve_and_desugar(const SourceModule& m, SymbolTable& table) {
  return Resolver(m, table).run();
}

ResolvedModule resolve_and_desugar(const SourceModule& m) {
  SymbolTable table;
  return resolve_and_desugar(m, table);
}

const FunctionDef* lookup_def(const Name& f, const ResolvedModule& m) {
  if (!f.is_function()) throw std::invalid_argument("lookup_def: " + f.str() + " is not a function name");
  auto it = m.defs.find(f);
  return it == m.defs.end() ? nullptr : &it->second;
}

SourceModule syntactic_compose(const SourceModule& m1, const SourceModule& m2) {
  for (const auto& e : m1.exports)
    for (const auto& e2 : m2.exports)
      if (e == e2)
        throw ResolveError(ResolveError::Kind::ExportClash, e, {}, "both modules export '" + e + "'");
  std::set<std::string> ids1 = all_idents(m1), ids2 = all_idents(m2);
  std::set<std::string> taken = ids1;
  taken.insert(ids2.begin(), ids2.end());
  SourceModule a = rename_apart(m1, ids2, taken);
  SourceModule b = rename_apart(m2, all_idents(a), taken);

  SourceModule out;
  out.exports = a.exports;
  out.exports.insert(out.exports.end(), b.exports.begin(), b.exports.end());
  std::set<std::string> exported(out.exports.begin(), out.exports.end());
  std::set<std::string> seen;
  for (const auto* imports : {&a.imports, &b.imports})
    for (const auto& i : *imports)
      if (!exported.count(i) && seen.insert(i).second) out.imports.push_back(i);
  out.vars = a.vars;
  out.funcs = a.funcs;
  out.order = a.order;
  for (auto [is_func, idx] : b.order) {
    if (is_func) {
      out.order.emplace_back(true, out.funcs.size());
      out.funcs.push_back(b.funcs[idx]);
    } else {
      out.order.emplace_back(false, out.vars.size());
      out.vars.push_back(b.vars[idx]);
    }
  }
  return out;
}

ResolvedModule link(const ResolvedModule& m1, const ResolvedModule& m2) {
  ResolvedModule out;
  out.exports = m1.exports | m2.exports;
  out.imports = (m1.imports | m2.imports) - out.exports;
  out.declared = m1.declared | m2.declared;
  out.init_store = m1.init_store;
  out.init_store.insert(m2.init_store.begin(), m2.init_store.end());
  out.defs = m1.defs;
  out.defs.insert(m2.defs.begin(), m2.defs.end());
  out.ident_of = m1.ident_of;
  out.ident_of.insert(m2.ident_of.begin(), m2.ident_of.end());
  return out;
}

}  // namespace sysgame
