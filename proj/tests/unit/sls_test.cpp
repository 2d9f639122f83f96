#include <gtest/gtest.h>

#include <set>

#include "sysgame/io.hpp"
#include "sysgame/sls.hpp"
#include "support.hpp"

using namespace sysgame;
using sysgame::test::fixture_module;
using sysgame::test::fixture_text;
using sysgame::test::module_of;

namespace {

const Name l3 = Name::loc(3), l4 = Name::loc(4), l5 = Name::loc(5), l9 = Name::loc(9);
const Name k0 = Name::cont(0), k1 = Name::cont(1), k7 = Name::cont(7);

Name named(const ResolvedModule& m, const std::string& id) {
  for (const auto& [n, s] : m.ident_of)
    if (s == id) return n;
  throw std::runtime_error("no " + id);
}

SystemMove call(const Name& f, const Name& k, Value v = {}, Store s = {}) { return {MoveKind::Call, f, v, k, s}; }
SystemMove ret(const Value& v, const Name& k, Store s = {}) { return {MoveKind::Ret, Name{}, v, k, s}; }

SystemConfig advance(const SystemConfig& sc, const SystemMove& mv, const ResolvedModule& m, Label* out = nullptr) {
  MoveOutcome r = apply_system_move(sc, mv, m);
  EXPECT_TRUE(std::holds_alternative<ProgramConfig>(r));
  RunResult run = run_to_boundary(std::get<ProgramConfig>(r), m, 1000);
  EXPECT_TRUE(run.result.is_boundary());
  Emission em = emit_boundary(run.last, run.result);
  if (out) *out = em.label;
  return em.next;
}

std::optional<MoveErrorKind> error_of(const SystemConfig& sc, const SystemMove& mv, const ResolvedModule& m) {
  MoveOutcome r = apply_system_move(sc, mv, m);
  if (auto* e = std::get_if<MoveError>(&r)) return e->kind;
  return std::nullopt;
}

// State after the program has disclosed its key cell: call prot, ret a2 to k1.
struct ProtAfterDisclosure {
  ResolvedModule m = fixture_module("prot.slc");
  SystemConfig after_read_call, after_disclosure;
  Label read_call, disclosure;
  ProtAfterDisclosure() {
    after_read_call = advance(initial_config(m), call(named(m, "prot"), k0), m, &read_call);
    after_disclosure = advance(after_read_call, ret(Value::name(l5), k1, {{l5, Value::integer(0)}}), m, &disclosure);
  }
};

}  // namespace

TEST(InitialConfig, Prot) {
  ResolvedModule m = fixture_module("prot.slc");
  SystemConfig c = initial_config(m);
  NameSet both{named(m, "prot"), named(m, "read")};
  EXPECT_EQ(c.used, both);
  EXPECT_EQ(c.pub, both);
  EXPECT_TRUE(c.store.empty());
}

TEST(InitialConfig, PrivateVariable) {
  ResolvedModule m = module_of("export f; decl x = 3; decl f() { return *x; }");
  SystemConfig c = initial_config(m);
  Name f = named(m, "f"), x = named(m, "x");
  EXPECT_EQ(c.used, (NameSet{f, x}));
  EXPECT_EQ(c.pub, (NameSet{f}));
  EXPECT_EQ(c.store, (Store{{x, Value::integer(3)}}));
}

TEST(InitialConfig, EmptyModule) {
  SystemConfig c = initial_config(module_of(""));
  EXPECT_TRUE(c.used.empty());
  EXPECT_TRUE(c.pub.empty());
  EXPECT_TRUE(c.store.empty());
}

TEST(Emit, ReadCallStoresTheContinuation) {
  ProtAfterDisclosure p;
  EXPECT_EQ(p.read_call.dir, Direction::PS);
  EXPECT_EQ(p.read_call.kind, MoveKind::Call);
  EXPECT_EQ(p.read_call.fn, named(p.m, "read"));
  EXPECT_TRUE(p.read_call.value.is_unit());
  EXPECT_EQ(p.read_call.k, k1);
  EXPECT_TRUE(p.read_call.store.empty());
  const Continuation* c = p.after_read_call.store.get_cont(k1);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->next, k0);
  EXPECT_EQ(c->frames.size(), 4u);
  EXPECT_TRUE(p.after_read_call.pub.contains(k1));
}

TEST(Emit, ReturnDisclosesKeyButNotSecret) {
  ProtAfterDisclosure p;
  EXPECT_EQ(p.disclosure.kind, MoveKind::Ret);
  EXPECT_EQ(p.disclosure.value, Value::name(l4));
  EXPECT_EQ(p.disclosure.k, k0);
  EXPECT_TRUE(p.after_disclosure.pub.contains(l4));
  EXPECT_FALSE(p.after_disclosure.pub.contains(l3));
  EXPECT_TRUE(p.after_disclosure.used.contains(l3));
}

TEST(Emit, NameFreeReturnDisclosesNothing) {
  ResolvedModule m = module_of("export f; decl f() { return 0; }");
  SystemConfig sc = initial_config(m);
  Label l;
  SystemConfig next = advance(sc, call(named(m, "f"), k0), m, &l);
  EXPECT_TRUE(l.store.empty());
  EXPECT_EQ(l.value, Value::integer(0));
  EXPECT_EQ(next.pub, sc.pub | NameSet{k0});
}

TEST(Apply, FakedSecondReturnIsAccepted) {
  ProtAfterDisclosure p;
  Store s = restrict_to(p.after_disclosure.store, p.after_disclosure.pub.locations());
  MoveOutcome r = apply_system_move(p.after_disclosure, ret(Value::name(l4), k1, s), p.m);
  ASSERT_TRUE(std::holds_alternative<ProgramConfig>(r));
  EXPECT_EQ(std::get<ProgramConfig>(r).ret_cont, k0);
}

TEST(Apply, GuessingTheSecretIsRejected) {
  ProtAfterDisclosure p;
  Store s = restrict_to(p.after_disclosure.store, p.after_disclosure.pub.locations());
  MoveOutcome r = apply_system_move(p.after_disclosure, ret(Value::name(l3), k1, s), p.m);
  ASSERT_TRUE(std::holds_alternative<MoveError>(r));
  const MoveError& e = std::get<MoveError>(r);
  EXPECT_EQ(e.kind, MoveErrorKind::GuessedPrivateName);
  EXPECT_EQ(e.names, (NameSet{l3}));
  EXPECT_NE(e.explanation().find("cannot guess private names"), std::string::npos);
}

TEST(Apply, CallFromInitialConfigRunsTheBody) {
  ResolvedModule m = fixture_module("prot.slc");
  MoveOutcome r = apply_system_move(initial_config(m), call(named(m, "prot"), k0), m);
  ASSERT_TRUE(std::holds_alternative<ProgramConfig>(r));
  const ProgramConfig& pc = std::get<ProgramConfig>(r);
  EXPECT_EQ(pc.ret_cont, k0);
  EXPECT_TRUE(pc.pub.contains(k0));
  RunResult run = run_to_boundary(pc, m, 100);
  EXPECT_EQ(run.result.kind, StepResult::Kind::SystemCall);
}

TEST(Apply, ErrorKinds) {
  ProtAfterDisclosure p;
  const SystemConfig& sc = p.after_disclosure;
  Store vis = restrict_to(sc.store, sc.pub.locations());
  Name prot = named(p.m, "prot"), read = named(p.m, "read");
  EXPECT_EQ(error_of(sc, ret(Value::integer(0), k7, vis), p.m), MoveErrorKind::UnknownContinuation);
  Store tamper = vis;
  tamper.set(Name::loc(0), Value::integer(1));
  EXPECT_EQ(error_of(sc, ret(Value::integer(0), k1, tamper), p.m), MoveErrorKind::PrivateStoreTampering);
  EXPECT_EQ(error_of(sc, ret(Value::integer(0), k1, {}), p.m), MoveErrorKind::MissingPublicFrame);
  Store with_k = vis;
  with_k.set_cont(k7, {{}, k7});
  EXPECT_EQ(error_of(sc, ret(Value::integer(0), k1, with_k), p.m), MoveErrorKind::ContinuationInStore);
  EXPECT_EQ(error_of(sc, call(read, k7, {}, vis), p.m), MoveErrorKind::UndefinedFunction);
  EXPECT_EQ(error_of(sc, ret(Value::name(l9), k1, vis), p.m), MoveErrorKind::UnboundFreshLocation);
  EXPECT_EQ(error_of(sc, call(prot, k1, {}, vis), p.m), MoveErrorKind::StoredContinuationReused);
  EXPECT_EQ(error_of(sc, call(prot, Name::loc(8), {}, vis), p.m), MoveErrorKind::IllSortedMove);
  EXPECT_EQ(error_of(sc, call(prot, Name::cont(9), {}, vis), p.m), std::nullopt);
}

namespace {

std::set<std::string> keys(const std::vector<SystemMove>& moves) {
  std::set<std::string> out;
  for (const auto& mv : moves) out.insert(move_to_json(mv).dump());
  return out;
}

// Every tuple over `atoms` of width ≤ w, every total update of the visible
// locations and of the fresh locations in the value, kept if valid.
std::vector<SystemMove> brute_force(const SystemConfig& sc, const ResolvedModule& m, const MoveBudget& b) {
  Name fresh_loc = fresh(Sort::Location, sc.used);
  std::vector<Value> atoms;
  for (auto n : b.int_pool) atoms.push_back(Value::integer(n));
  for (const auto& a : sc.pub)
    if (!a.is_continuation()) atoms.push_back(Value::name(a));
  atoms.push_back(Value::name(fresh_loc));
  std::vector<Value> values{Value::unit()};
  std::vector<std::vector<Value>> layer{{}};
  for (std::size_t w = 1; w <= b.max_tuple_width; ++w) {
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : layer)
      for (const auto& a : atoms) {
        auto t = prefix;
        t.push_back(a);
        values.push_back(Value::tuple(t));
        next.push_back(std::move(t));
      }
    layer = std::move(next);
  }
  std::vector<Name> targets;
  for (const auto& n : sc.pub) targets.push_back(n);
  std::vector<SystemMove> out;
  for (const auto& v : values) {
    std::vector<Name> slots;
    for (const auto& a : sc.pub.locations()) slots.push_back(a);
    if (support(v).contains(fresh_loc)) slots.push_back(fresh_loc);
    std::vector<Store> stores{{}};
    for (const auto& a : slots) {
      std::vector<Value> choices;
      for (auto n : b.int_pool) choices.push_back(Value::integer(n));
      if (auto cur = sc.store.get(a); cur && std::find(choices.begin(), choices.end(), *cur) == choices.end())
        choices.push_back(*cur);
      std::vector<Store> next;
      for (const auto& s : stores)
        for (const auto& c : choices) {
          Store t = s;
          t.set(a, c);
          next.push_back(t);
        }
      stores = std::move(next);
    }
    for (const auto& s : stores)
      for (const auto& t : targets) {
        SystemMove mv = t.is_function() ? call(t, fresh(Sort::Continuation, sc.used), v, s) : ret(v, t, s);
        if (!t.is_function() && !t.is_continuation()) continue;
        if (std::holds_alternative<ProgramConfig>(apply_system_move(sc, mv, m))) out.push_back(mv);
      }
  }
  return out;
}

}  // namespace

TEST(Enumerate, InitialProtOffersOnlyCalls) {
  ResolvedModule m = fixture_module("prot.slc");
  MoveBudget b;
  b.int_pool = {0};
  SystemConfig sc = initial_config(m);
  auto moves = enumerate_system_moves(sc, m, b);
  ASSERT_FALSE(moves.empty());
  for (const auto& mv : moves) {
    EXPECT_EQ(mv.kind, MoveKind::Call);
    EXPECT_EQ(mv.fn, named(m, "prot"));
    EXPECT_EQ(mv.k, k0);
    EXPECT_TRUE(std::holds_alternative<ProgramConfig>(apply_system_move(sc, mv, m)));
  }
  EXPECT_EQ(keys(moves), keys(brute_force(sc, m, b)));
}

TEST(Enumerate, StoredContinuationOffersReturnsOnly) {
  ProtAfterDisclosure p;
  MoveBudget b;
  b.int_pool = {0};
  const SystemConfig& sc = p.after_read_call;
  ASSERT_TRUE(sc.pub.locations().empty());
  auto moves = enumerate_system_moves(sc, p.m, b);
  ASSERT_FALSE(moves.empty());
  bool any_ret = false;
  for (const auto& mv : moves) {
    EXPECT_TRUE(std::holds_alternative<ProgramConfig>(apply_system_move(sc, mv, p.m)));
    if (mv.kind == MoveKind::Ret) {
      any_ret = true;
      EXPECT_EQ(mv.k, k1);
    }
  }
  EXPECT_TRUE(any_ret);
  EXPECT_EQ(keys(moves), keys(brute_force(sc, p.m, b)));
}

TEST(Enumerate, MatchesBruteForceAfterDisclosure) {
  ProtAfterDisclosure p;
  MoveBudget b;
  EXPECT_EQ(keys(enumerate_system_moves(p.after_disclosure, p.m, b)), keys(brute_force(p.after_disclosure, p.m, b)));
}

TEST(Enumerate, NothingEnabled) {
  MoveBudget b;
  b.int_pool = {};
  b.max_fresh_locs = 0;
  b.max_tuple_width = 0;
  EXPECT_TRUE(enumerate_system_moves(initial_config(module_of("")), module_of(""), b).empty());
  ResolvedModule closed = module_of("decl f() { return 0; }");
  EXPECT_TRUE(enumerate_system_moves(initial_config(closed), closed, MoveBudget{}).empty());
}

TEST(Replay, AttackScriptLeaksTheSecret) {
  ResolvedModule m = fixture_module("prot.slc");
  ReplayResult r = replay(m, parse_script(fixture_text("attack.jsonl")), 1000);
  ASSERT_FALSE(r.error.has_value());
  ASSERT_EQ(r.trace.size(), 6u);
  const Direction dirs[] = {Direction::SP, Direction::PS, Direction::SP, Direction::PS, Direction::SP, Direction::PS};
  const MoveKind kinds[] = {MoveKind::Call, MoveKind::Call, MoveKind::Ret, MoveKind::Ret, MoveKind::Ret, MoveKind::Ret};
  const Name conts[] = {k0, k1, k1, k0, k1, k0};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(r.trace[i].dir, dirs[i]) << i;
    EXPECT_EQ(r.trace[i].kind, kinds[i]) << i;
    EXPECT_EQ(r.trace[i].k, conts[i]) << i;
  }
  EXPECT_EQ(r.trace[3].value, r.trace[4].value);
  Name secret = r.trace[5].value.as_name();
  for (int i = 0; i < 5; ++i) EXPECT_FALSE(r.public_after[i].contains(secret)) << i;
  EXPECT_TRUE(r.public_after[5].contains(secret));
}

TEST(Replay, EmptyScript) {
  ReplayResult r = replay(fixture_module("prot.slc"), {}, 1000);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_FALSE(r.error.has_value());
}

TEST(Replay, StalePrivateNameStopsAfterOneLabel) {
  ResolvedModule m = fixture_module("prot.slc");
  std::vector<SystemMove> script{call(named(m, "prot"), k0), ret(Value::name(l3), k1)};
  ReplayResult r = replay(m, script, 1000);
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(r.error->kind, ReplayErrorKind::InvalidMove);
  EXPECT_EQ(r.error->move_index, 1u);
  ASSERT_TRUE(r.error->move_error.has_value());
  EXPECT_EQ(r.error->move_error->kind, MoveErrorKind::GuessedPrivateName);
  EXPECT_EQ(r.trace.size(), 2u);
}

TEST(Explore, ReturnSevenTree) {
  ResolvedModule m = module_of("export f; decl f() { return 7; }");
  MoveBudget b;
  b.max_depth = 2;
  SlsLts lts = explore(m, b);
  const Lts& g = lts.graph;
  std::size_t calls = enumerate_system_moves(initial_config(m), m, b).size();
  EXPECT_EQ(g.out[0].size(), calls);
  for (const auto& e : g.out[0]) {
    EXPECT_EQ(e.label.kind, MoveKind::Call);
    ASSERT_EQ(g.out[e.to].size(), 1u);
    const Label& r = g.out[e.to][0].label;
    EXPECT_EQ(r.dir, Direction::PS);
    EXPECT_EQ(r.kind, MoveKind::Ret);
    EXPECT_EQ(r.value, Value::integer(7));
    EXPECT_EQ(r.k, e.label.k);
    EXPECT_TRUE(g.out[g.out[e.to][0].to].empty());
  }
}

TEST(Explore, EmptyModule) {
  SlsLts lts = explore(module_of(""), MoveBudget{});
  EXPECT_EQ(lts.states.size(), 1u);
  EXPECT_EQ(lts.graph.edge_count(), 0u);
}

TEST(Explore, ProtContainsTheLeak) {
  ResolvedModule m = fixture_module("prot.slc");
  MoveBudget b;
  b.int_pool = {0};
  SlsLts lts = explore(m, b);
  bool leak = false;
  for (std::size_t i = 0; i < lts.graph.nodes.size() && !leak; ++i)
    for (const auto& e : lts.graph.out[i]) {
      if (e.label.dir != Direction::PS || e.label.kind != MoveKind::Ret || !e.label.value.is_name()) continue;
      std::vector<const LtsEdge*> path = lts.graph.path_to(i);
      if (path.size() != 5) continue;
      // A location returned to k0 after the System resumed k1 with a name the Program had disclosed.
      const Label& fake = path[4]->label;
      if (fake.kind == MoveKind::Ret && fake.dir == Direction::SP && fake.value == path[3]->label.value &&
          e.label.value != fake.value && !lts.graph.nodes[i].pub.contains(e.label.value.as_name()))
        leak = true;
    }
  EXPECT_TRUE(leak);
}

TEST(Explore, ParallelMatchesSerial) {
  ResolvedModule m = fixture_module("prot.slc");
  MoveBudget b;
  b.max_depth = 4;
  SlsLts a = explore(m, b), c = explore(m, b, ExploreOptions{4});
  EXPECT_EQ(a.states.size(), c.states.size());
  EXPECT_EQ(a.graph.edge_count(), c.graph.edge_count());
}

TEST(Canonical, NoPrivateNamesIsIdentity) {
  SlsState s = initial_config(fixture_module("prot.slc"));
  Canonical c = canonicalize(s);
  EXPECT_TRUE(state_equal(c.state, s));
  EXPECT_TRUE(c.witness.is_identity());
}

TEST(Canonical, PrivateSwapGivesSameKey) {
  ProtAfterDisclosure p;
  SlsState s = p.after_disclosure;
  SlsState swapped = apply_perm(Permutation::swap(Name::loc(0), Name::loc(2)), s);
  EXPECT_EQ(canonicalize(s).key, canonicalize(swapped).key);
  SlsState moved_pub = apply_perm(Permutation::swap(l4, Name::loc(11)), s);
  EXPECT_NE(canonicalize(s).key, canonicalize(moved_pub).key);
}
