#include <gtest/gtest.h>

#include <set>

#include "sysgame/syntax.hpp"
#include "support.hpp"

using namespace sysgame;
using sysgame::test::fixture_text;
using sysgame::test::module_of;

namespace {

const char* kF = "export f; import g; decl f() {local x; g(); return *x;}";
const char* kG = "export g; decl g() {return 0;}";

Name named(const ResolvedModule& m, const std::string& id) {
  for (const auto& [n, s] : m.ident_of)
    if (s == id) return n;
  throw std::runtime_error("no " + id);
}

}  // namespace

TEST(Parse, ProtModule) {
  SourceModule m = parse_module(fixture_text("prot.slc"));
  ASSERT_EQ(m.funcs.size(), 1u);
  EXPECT_EQ(m.funcs[0].id, "prot");
  EXPECT_EQ(m.funcs[0].locals, (std::vector<std::string>{"s", "k", "x"}));
  EXPECT_EQ(m.exports, std::vector<std::string>{"prot"});
  EXPECT_EQ(m.imports, std::vector<std::string>{"read"});
}

TEST(Parse, FirstEquivalenceProgram) { EXPECT_NO_THROW(parse_module(kF)); }

TEST(Parse, SyntaxErrorHasPosition) {
  try {
    parse_module("export f; decl f( {");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.pos().line, 1);
    EXPECT_EQ(e.pos().col, 19);
  }
}

TEST(Parse, PrintedModuleReparses) {
  SourceModule m = parse_module(fixture_text("prot.slc"));
  SourceModule again = parse_module(print_module(m));
  EXPECT_EQ(print_module(again), print_module(m));
}

TEST(Resolve, ProtBody) {
  ResolvedModule m = module_of(fixture_text("prot.slc"));
  Name prot = named(m, "prot"), read = named(m, "read");
  const FunctionDef* d = lookup_def(prot, m);
  ASSERT_NE(d, nullptr);
  EXPECT_TRUE(d->params.empty());
  std::string e = "local s; local k; local x; s = new(); k = new(); x = " + read.str() +
                  "(); if (*x == *k) then {*s} else {*k}";
  EXPECT_EQ(render(d->body), e);
  EXPECT_EQ(lookup_def(read, m), nullptr);
  EXPECT_THROW(lookup_def(Name::loc(0), m), std::invalid_argument);
}

TEST(Resolve, Initializer) {
  ResolvedModule m = module_of("decl x = 5;");
  Name x = named(m, "x");
  EXPECT_TRUE(x.is_location());
  EXPECT_EQ(m.init_store.at(x), Value::integer(5));
}

TEST(Resolve, UnboundIdentifier) {
  try {
    module_of("decl f() { return *y; }");
    FAIL() << "expected a resolve error";
  } catch (const ResolveError& e) {
    EXPECT_EQ(e.kind(), ResolveError::Kind::UnboundIdentifier);
    EXPECT_EQ(e.ident(), "y");
  }
}

TEST(Resolve, InterfaceSorts) {
  ResolvedModule m = module_of(kF);
  EXPECT_TRUE(named(m, "f").is_function());
  EXPECT_TRUE(named(m, "g").is_function());
  EXPECT_EQ(m.exports, (NameSet{named(m, "f")}));
  EXPECT_EQ(m.imports, (NameSet{named(m, "g")}));
}

TEST(Resolve, SharedTableAgreesOnGlobals) {
  SymbolTable t;
  ResolvedModule a = resolve_and_desugar(parse_module(kF), t);
  ResolvedModule b = resolve_and_desugar(parse_module(kG), t);
  EXPECT_EQ(a.imports, b.exports);
  EXPECT_TRUE(a.declared.disjoint(b.declared - b.exports));
}

TEST(Compose, LinksImportsToExports) {
  SourceModule c = syntactic_compose(parse_module(kF), parse_module(kG));
  SourceModule re = parse_module(print_module(c));
  EXPECT_TRUE(re.imports.empty());
  EXPECT_TRUE(re.declares_function("f"));
  EXPECT_TRUE(re.declares_function("g"));
  ResolvedModule m = resolve_and_desugar(re);
  EXPECT_EQ(m.exports.size(), 2u);
  EXPECT_TRUE(m.imports.empty());
}

TEST(Compose, EmptyModuleIsNeutral) {
  SourceModule a = parse_module(kF);
  SourceModule c = syntactic_compose(a, parse_module(""));
  EXPECT_EQ(c.exports, a.exports);
  EXPECT_EQ(c.imports, a.imports);
  EXPECT_EQ(c.funcs.size(), a.funcs.size());
  EXPECT_EQ(c.vars.size(), a.vars.size());
}

TEST(Compose, PrivateIdentifiersRenamedApart) {
  SourceModule c = syntactic_compose(parse_module("export f; decl x = 1; decl f() { return *x; }"),
                                     parse_module("export g; decl x = 2; decl g() { return *x; }"));
  ResolvedModule m = resolve_and_desugar(c);
  EXPECT_EQ(m.init_store.size(), 2u);
  std::set<std::string> inits;
  for (const auto& [n, v] : m.init_store) inits.insert(v.str());
  EXPECT_EQ(inits, (std::set<std::string>{"1", "2"}));
}
