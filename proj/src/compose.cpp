#include "sysgame/compose.hpp"

#include <algorithm>
#include <unordered_map>

namespace sysgame {

namespace {

const SlsState& side(const CompositeState& cs, int i) { return i == 1 ? cs.left : cs.right; }
SlsState& side(CompositeState& cs, int i) { return i == 1 ? cs.left : cs.right; }
const ResolvedModule& module(const Composition& c, int i) { return i == 1 ? c.left : c.right; }

int active_side(const CompositeState& cs) {
  if (std::holds_alternative<ProgramConfig>(cs.left)) return 1;
  if (std::holds_alternative<ProgramConfig>(cs.right)) return 2;
  return 0;
}

bool stores_cont(const SlsState& x, const Name& k) { return state_store(x).get_cont(k) != nullptr; }

NameSet all_used(const CompositeState& cs) { return used_names(cs.left) | used_names(cs.right); }

// ⟨⟨N₁∪N₂ | 𝔭 ⊢ s↾𝔭 + stored 𝔭-continuations⟩⟩: what the outside System sees.
SystemConfig outside_view(const CompositeState& cs) {
  SystemConfig sc;
  sc.used = all_used(cs);
  sc.pub = cs.shared;
  sc.store = restrict_to(cs.aux, cs.shared.locations());
  for (const auto& k : cs.shared.continuations())
    for (const SlsState* x : {&cs.left, &cs.right})
      if (const auto* cont = state_store(*x).get_cont(k)) sc.store.set_cont(k, *cont);
  return sc;
}

}  // namespace

std::string render(const CompositeState& cs) {
  return render(cs.left) + " || " + render(cs.right) + " with shared " + cs.shared.str() + ", system conts " +
         cs.system_conts.str() + ", aux " + render(cs.aux);
}

CompositeState swap_sides(const CompositeState& cs) {
  CompositeState out = cs;
  std::swap(out.left, out.right);
  out.last_active = cs.last_active == 0 ? 0 : 3 - cs.last_active;
  return out;
}

Composition make_composition(const ResolvedModule& m1, const ResolvedModule& m2, ComposeFaults faults) {
  return {m1, m2, link(m1, m2), faults};
}

KnowledgeUpdate knowledge_update(const NameSet& shared, const NameSet& system_conts, const Store& aux,
                                 Polarity pol, const Value& v, const std::optional<Name>& k, const Store& s,
                                 const NameSet& private_names, bool skip_closure) {
  KnowledgeUpdate out;
  out.aux = update(aux, s);
  out.system_conts = system_conts;
  if (pol == Polarity::Program) {
    out.shared = skip_closure ? (shared | support(v)) : location_closure(out.aux, support(v) | shared);
  } else {
    Store before = restrict_to(aux, shared);
    if (!extends(before, s)) out.violations.push_back("update does not extend the shared store");
    if (!contains_bindings(s, restrict_from(aux, shared)))
      out.violations.push_back("update changes locations private to the composite");
    NameSet bound = (s.domain() & private_names) - aux.domain();
    if (!bound.empty()) out.violations.push_back("update binds private locations " + bound.str());
    Store visible = restrict_from(s, private_names);
    NameSet disclosed = support(v) | support(visible);
    NameSet leaked = disclosed & private_names;
    if (!leaked.empty()) out.violations.push_back("move mentions private names " + leaked.str());
    out.shared = shared | disclosed;
  }
  if (k) {
    out.shared.insert(*k);
    if (pol == Polarity::System) out.system_conts.insert(*k);
  }
  return out;
}

CompositeState composite_init(const Composition& c) {
  CompositeState cs;
  SystemConfig a = initial_config(c.left);
  SystemConfig b = initial_config(c.right);
  cs.shared = a.pub | b.pub;
  cs.aux = update(restrict_to(a.store, a.pub.locations()), restrict_to(b.store, b.pub.locations()));
  cs.left = std::move(a);
  cs.right = std::move(b);
  return cs;
}

namespace {

// Rules 2 and 3: the passive side answers the active side's boundary move.
std::variant<CompositeSuccessor, std::string> synchronise(const Composition& c, const CompositeState& cs, int i,
                                                          const Emission& em, int rule) {
  int j = 3 - i;
  const auto& passive = std::get<SystemConfig>(side(cs, j));
  Store aux = update(cs.aux, em.label.store);
  SystemMove mv = as_move(em.label);
  mv.store = restrict_to(aux, passive.pub.locations() | em.label.store.domain());
  MoveOutcome r = apply_system_move(passive, mv, module(c, j));
  if (auto* err = std::get_if<MoveError>(&r))
    return std::string(rule == 2 ? "cross-call" : "cross-return") + " rejected: " + err->message;
  CompositeSuccessor out;
  out.rule = rule;
  out.tau = true;
  out.next = cs;
  side(out.next, i) = em.next;
  side(out.next, j) = std::get<ProgramConfig>(std::move(r));
  out.next.aux = std::move(aux);
  out.next.last_active = 0;
  return out;
}

// Rules 4 and 5: the boundary move leaves the composite.
CompositeSuccessor leave(const Composition& c, const CompositeState& cs, int i, const Emission& em, int rule) {
  std::optional<Name> k;
  if (em.label.kind == MoveKind::Call) k = em.label.k;
  KnowledgeUpdate ku = knowledge_update(cs.shared, cs.system_conts, cs.aux, Polarity::Program, em.label.value, k,
                                        em.label.store, {}, c.faults.skip_closure_in_p_update);
  CompositeSuccessor out;
  out.rule = rule;
  out.label = em.label;
  out.label.store = restrict_to(ku.aux, ku.shared.locations());
  out.next = cs;
  side(out.next, i) = em.next;
  out.next.shared = std::move(ku.shared);
  out.next.system_conts = std::move(ku.system_conts);
  out.next.aux = std::move(ku.aux);
  out.next.last_active = i;
  return out;
}

CompositeStep program_step(const Composition& c, const CompositeState& cs, int i) {
  CompositeStep out;
  int j = 3 - i;
  const auto& pc = std::get<ProgramConfig>(side(cs, i));
  const NameSet avoid = used_names(side(cs, j));
  StepResult r = step(pc, module(c, i), &avoid);
  switch (r.kind) {
    case StepResult::Kind::Internal: {
      CompositeSuccessor s;
      s.rule = 1;
      s.tau = false;
      s.next = cs;
      side(s.next, i) = std::move(r.next);
      s.next.last_active = 0;
      out.next.push_back(std::move(s));
      return out;
    }
    case StepResult::Kind::Crash:
      out.status = NodeStatus::Crashed;
      out.detail = std::string(crash_reason_name(r.reason)) + ": " + r.detail;
      return out;
    case StepResult::Kind::Divergent:
      out.status = NodeStatus::Diverged;
      out.detail = r.detail;
      return out;
    case StepResult::Kind::SystemCall: {
      bool cross = lookup_def(r.fn, module(c, j)) != nullptr;
      const NameSet* widen = cross && c.faults.drop_cross_call_freshness ? nullptr : &avoid;
      Emission em = emit_boundary(pc, r, widen);
      if (!cross) {
        out.next.push_back(leave(c, cs, i, em, 4));
        return out;
      }
      auto s = synchronise(c, cs, i, em, 2);
      if (auto* err = std::get_if<std::string>(&s)) {
        out.status = NodeStatus::Crashed;
        out.detail = *err;
      } else {
        out.next.push_back(std::get<CompositeSuccessor>(std::move(s)));
      }
      return out;
    }
    case StepResult::Kind::SystemReturn: {
      Emission em = emit_boundary(pc, r);
      if (!stores_cont(side(cs, j), r.k)) {
        out.next.push_back(leave(c, cs, i, em, 5));
        return out;
      }
      auto s = synchronise(c, cs, i, em, 3);
      if (auto* err = std::get_if<std::string>(&s)) {
        out.status = NodeStatus::Crashed;
        out.detail = *err;
      } else {
        out.next.push_back(std::get<CompositeSuccessor>(std::move(s)));
      }
      return out;
    }
  }
  return out;
}

}  // namespace

std::variant<CompositeSuccessor, std::string> composite_system_move(const Composition& c, const CompositeState& cs,
                                                                    const SystemMove& mv) {
  if (active_side(cs) != 0) return std::string("a Program configuration is active");
  SystemConfig view = outside_view(cs);
  MoveOutcome checked = apply_system_move(view, mv, c.linked);
  if (auto* err = std::get_if<MoveError>(&checked)) return err->explanation();

  bool call = mv.kind == MoveKind::Call;
  int i = 0;
  for (int t : {1, 2}) {
    bool target = call ? lookup_def(mv.fn, module(c, t)) != nullptr : stores_cont(side(cs, t), mv.k);
    if (target) i = t;
  }
  if (i == 0) return std::string("no component answers ") + render(as_label(mv));
  int j = 3 - i;
  NameSet other = support(side(cs, j));
  if (call ? (other - cs.system_conts).contains(mv.k) : other.contains(mv.k))
    return mv.k.str() + " is known to the other component";

  Store full = update(cs.aux, mv.store);
  NameSet priv = all_used(cs) - cs.shared;
  std::optional<Name> k;
  if (call) k = mv.k;
  KnowledgeUpdate ku =
      knowledge_update(cs.shared, cs.system_conts, cs.aux, Polarity::System, mv.value, k, full, priv);
  if (!ku.violations.empty()) return ku.violations.front();

  const auto& target = std::get<SystemConfig>(side(cs, i));
  SystemMove inner = mv;
  inner.store = restrict_to(full, target.pub.locations() | mv.store.domain());
  MoveOutcome r = apply_system_move(target, inner, module(c, i));
  if (auto* err = std::get_if<MoveError>(&r)) return err->explanation();

  CompositeSuccessor out;
  out.rule = call ? 6 : 7;
  out.label = as_label(mv);
  out.label.store = restrict_to(ku.aux, ku.shared.locations());
  out.next = cs;
  side(out.next, i) = std::get<ProgramConfig>(std::move(r));
  out.next.shared = std::move(ku.shared);
  out.next.system_conts = std::move(ku.system_conts);
  out.next.aux = std::move(ku.aux);
  out.next.last_active = 0;
  return out;
}

CompositeStep composite_step(const Composition& c, const CompositeState& cs, const MoveBudget& b) {
  if (int i = active_side(cs)) return program_step(c, cs, i);
  CompositeStep out;
  for (const auto& mv : enumerate_system_moves(outside_view(cs), c.linked, b)) {
    auto r = composite_system_move(c, cs, mv);
    if (auto* s = std::get_if<CompositeSuccessor>(&r)) out.next.push_back(std::move(*s));
  }
  return out;
}

CompositeStep composite_advance(const Composition& c, const CompositeState& cs, const MoveBudget& b) {
  CompositeState cur = cs;
  for (std::size_t n = 0; n <= b.fuel; ++n) {
    CompositeStep st = composite_step(c, cur, b);
    if (st.status != NodeStatus::Live || st.next.size() != 1 || st.next[0].rule != 1) return st;
    cur = std::move(st.next[0].next);
  }
  CompositeStep out;
  out.status = NodeStatus::Diverged;
  out.detail = "fuel exhausted after " + std::to_string(b.fuel) + " internal steps";
  return out;
}

// ---------------------------------------------------------------------------
// Reachable-state invariants

bool LemmaReport::holds() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const LemmaClause& c) { return c.holds; });
}

std::string LemmaReport::failures() const {
  std::string out;
  for (const auto& c : clauses)
    if (!c.holds) out += (out.empty() ? "" : "; ") + c.name + ": " + c.detail;
  return out;
}

LemmaReport check_state_lemma(const CompositeState& cs) {
  LemmaReport r;
  const NameSet& n1 = used_names(cs.left);
  const NameSet& n2 = used_names(cs.right);
  const NameSet& p1 = public_names(cs.left);
  const NameSet& p2 = public_names(cs.right);
  const Store& s1 = state_store(cs.left);
  const Store& s2 = state_store(cs.right);
  const NameSet both = p1 | p2;
  auto clause = [&](std::string name, bool holds, std::string detail) {
    r.clauses.push_back({std::move(name), holds, holds ? std::string() : std::move(detail)});
  };

  NameSet clash = ((n1 - p1) & n2) | (n1 & (n2 - p2));
  clause("private names disjoint", clash.empty(), "shared private names " + clash.str());
  clause("public outside shared agree", (p1 - cs.shared) == (p2 - cs.shared),
         (p1 - cs.shared).str() + " vs " + (p2 - cs.shared).str());
  NameSet reach = support(cs.aux) | both.continuations();
  NameSet non_fn = cs.shared - cs.shared.functions();
  clause("shared names covered", non_fn.subset_of(reach) && reach.subset_of(both) &&
                                     cs.shared.functions().subset_of(both),
         "shared " + cs.shared.str() + ", aux and continuations " + reach.str() + ", public " + both.str());
  clause("aux domain is the public locations", cs.aux.domain() == both.locations(),
         "aux domain " + cs.aux.domain().str() + ", public locations " + both.locations().str());

  NameSet d1 = s1.domain().continuations(), d2 = s2.domain().continuations();
  clause("stored continuations disjoint", d1.disjoint(d2), "both store " + (d1 & d2).str());
  clause("stored continuations not system-owned", (d1 | d2).disjoint(cs.system_conts),
         "system-owned yet stored " + ((d1 | d2) & cs.system_conts).str());
  NameSet lhs = (p1 & p2).continuations() - cs.system_conts;
  NameSet rhs = both.continuations() - cs.shared;
  clause("internal continuations", lhs == rhs, lhs.str() + " vs " + rhs.str());

  bool prog1 = std::holds_alternative<ProgramConfig>(cs.left);
  bool prog2 = std::holds_alternative<ProgramConfig>(cs.right);
  clause("at most one program", !(prog1 && prog2), "both sides are Program configurations");
  if (!prog1 && !prog2 && cs.last_active != 0) {
    const NameSet& pi = cs.last_active == 1 ? p1 : p2;
    const NameSet& pj = cs.last_active == 1 ? p2 : p1;
    const Store& si = cs.last_active == 1 ? s1 : s2;
    const Store& sj = cs.last_active == 1 ? s2 : s1;
    clause("aux agrees after program turn",
           contains_bindings(si, restrict_to(cs.aux, pi)) && contains_bindings(sj, restrict_to(cs.aux, pj - pi)),
           "aux " + render(cs.aux) + " vs stores " + render(s1) + ", " + render(s2));
  }
  if (!prog1 && !prog2) {
    NameSet common = p1 & p2;
    clause("aux agrees on one-sided locations",
           contains_bindings(s1, restrict_to(cs.aux, p1 - common)) &&
               contains_bindings(s2, restrict_to(cs.aux, p2 - common)),
           "aux " + render(cs.aux) + " vs stores " + render(s1) + ", " + render(s2));
  }
  if (prog1 != prog2) {
    const NameSet& pi = prog1 ? p1 : p2;
    const NameSet& pj = prog1 ? p2 : p1;
    const Store& sj = prog1 ? s2 : s1;
    clause("passive side agrees with aux", contains_bindings(sj, restrict_to(cs.aux, pj - pi)),
           "aux " + render(cs.aux) + " vs passive store " + render(sj));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Translation into the syntactic composite

NameSet stitched_conts(const CompositeState& cs) {
  return (public_names(cs.left) & public_names(cs.right)).continuations() - cs.system_conts;
}

namespace {

Continuation stitch(const Store& s1, const Store& s2, const NameSet& K, Continuation c) {
  for (std::size_t guard = 0; K.contains(c.next); ++guard) {
    const Continuation* link = s1.get_cont(c.next);
    if (!link) link = s2.get_cont(c.next);
    if (!link) throw ComposeError("continuation " + c.next.str() + " is internal but stored on neither side");
    if (guard > s1.domain().size() + s2.domain().size())
      throw ComposeError("cyclic continuation chain through " + c.next.str());
    FrameStack frames = link->frames;
    frames.insert(frames.end(), c.frames.begin(), c.frames.end());
    c = {std::move(frames), link->next};
  }
  return c;
}

Store stitched_store(const Store& s, const Store& s1, const Store& s2, const NameSet& K) {
  Store out;
  for (const auto& [a, v] : s.locations()) out.set(a, v);
  for (const auto& [k, c] : s.continuations())
    if (!K.contains(k)) out.set_cont(k, stitch(s1, s2, K, c));
  return out;
}

}  // namespace

SlsState translate_R(const CompositeState& cs) {
  const NameSet K = stitched_conts(cs);
  const Store& s1 = state_store(cs.left);
  const Store& s2 = state_store(cs.right);
  Store h1 = stitched_store(s1, s1, s2, K);
  Store h2 = stitched_store(s2, s1, s2, K);
  NameSet used = all_used(cs) - K;
  int i = active_side(cs);
  if (i == 0) {
    Store common = restrict_to(cs.aux, public_names(cs.left) & public_names(cs.right));
    return SystemConfig{used, cs.shared, update(update(h1, common), update(h2, common))};
  }
  const auto& pc = std::get<ProgramConfig>(side(cs, i));
  ProgramConfig out;
  out.used = std::move(used);
  out.pub = cs.shared;
  out.store = i == 1 ? update(h2, h1) : update(h1, h2);
  Continuation top = stitch(s1, s2, K, {pc.frames, pc.ret_cont});
  out.frames = std::move(top.frames);
  out.control = pc.control;
  out.ret_cont = top.next;
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

namespace {

struct CanonicalComposite {
  CompositeState state;
  std::string key;
};

CanonicalComposite canonicalize(const CompositeState& cs, const NameSet& statics) {
  NameSet pinned = statics | cs.shared;
  std::vector<Name> seeds;
  if (int i = active_side(cs)) {
    const auto& pc = std::get<ProgramConfig>(side(cs, i));
    auto seed = [&](const Name& n) { seeds.push_back(n); };
    visit_names(pc.control, seed);
    visit_names(pc.frames, seed);
    seed(pc.ret_cont);
  }
  const Store& s1 = state_store(cs.left);
  const Store& s2 = state_store(cs.right);
  Permutation pi = canonical_renaming(seeds, cs.shared, {&s1, &s2, &cs.aux}, all_used(cs), pinned);
  CanonicalComposite out{cs, ""};
  out.state.left = apply_perm(pi, cs.left);
  out.state.right = apply_perm(pi, cs.right);
  out.state.aux = apply_perm(pi, cs.aux);
  out.key = render(out.state) + " #" + std::to_string(cs.last_active);
  return out;
}

}  // namespace

CompositeLts explore_composite(const Composition& c, const MoveBudget& b, std::size_t tau_limit) {
  CompositeLts out;
  out.graph.max_depth = b.max_depth;
  const NameSet statics = c.left.static_names() | c.right.static_names();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> tau_run;

  auto add = [&](const CompositeState& cs, std::size_t depth, std::size_t run, std::ptrdiff_t parent,
                 std::size_t parent_edge) {
    CanonicalComposite cc = canonicalize(cs, statics);
    auto [it, inserted] = index.emplace(std::move(cc.key), out.states.size());
    if (!inserted) return std::make_pair(it->second, false);
    LtsNode node;
    node.pub = cs.shared;
    node.depth = depth;
    node.parent = parent;
    node.parent_edge = parent_edge;
    out.graph.nodes.push_back(std::move(node));
    out.graph.out.emplace_back();
    out.states.push_back(std::move(cc.state));
    tau_run.push_back(run);
    return std::make_pair(it->second, true);
  };

  add(composite_init(c), 0, 0, -1, 0);
  std::vector<std::size_t> level{0};
  for (std::size_t depth = 0; depth < b.max_depth && !level.empty(); ++depth) {
    std::vector<std::size_t> next_level;
    for (std::size_t li = 0; li < level.size(); ++li) {
      std::size_t from = level[li];
      CompositeStep st = active_side(out.states[from]) ? composite_advance(c, out.states[from], b)
                                                       : composite_step(c, out.states[from], b);
      auto& node = out.graph.nodes[from];
      node.expanded = true;
      node.status = st.status;
      node.detail = st.detail;
      for (auto& succ : st.next) {
        if (succ.tau && tau_run[from] + 1 > tau_limit) {
          out.graph.nodes[from].status = NodeStatus::Diverged;
          out.graph.nodes[from].detail = "more than " + std::to_string(tau_limit) + " consecutive internal moves";
          continue;
        }
        std::size_t edge = out.graph.out[from].size();
        std::size_t d = succ.tau ? depth : depth + 1;
        std::size_t run = succ.tau ? tau_run[from] + 1 : 0;
        auto [to, inserted] = add(succ.next, d, run, static_cast<std::ptrdiff_t>(from), edge);
        out.graph.out[from].push_back({to, succ.tau, succ.tau ? Label{} : std::move(succ.label)});
        if (inserted) (succ.tau ? level : next_level).push_back(to);
      }
    }
    level = std::move(next_level);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conformance

bool CompositionReport::items_hold() const {
  return std::all_of(std::begin(items), std::end(items), [](const ItemResult& r) { return r.failed == 0; });
}

bool CompositionReport::holds() const { return items_hold() && lemma_failures == 0 && bisim && bisim->bisimilar(); }

namespace {

class ItemChecker {
 public:
  ItemChecker(const Composition& c, const MoveBudget& b, CompositionReport& r) : c_(c), b_(b), r_(r) {}

  void check(const CompositeState& x) {
    try {
      if (active_side(x)) check_program(x);
      else check_system(x);
    } catch (const ComposeError& e) {
      fail(0, x, std::string("translation failed: ") + e.what());
    }
  }

 private:
  void pass(int item) { ++r_.items[item].checked; }

  void fail(int item, const CompositeState& x, const std::string& why) {
    auto& it = r_.items[item];
    ++it.checked;
    ++it.failed;
    if (!it.first_failure.empty()) return;
    it.first_failure = why + "\n  composite: " + render(x);
    try {
      it.first_failure += "\n  translated: " + render(translate_R(x));
    } catch (const ComposeError&) {
    }
  }

  void expect(int item, bool ok, const CompositeState& x, const std::string& why) {
    if (ok) pass(item);
    else fail(item, x, why);
  }

  void check_program(const CompositeState& x) {
    CompositeState cur = x;
    for (std::size_t n = 0; n <= b_.fuel; ++n) {
      SlsState rx = translate_R(cur);
      const auto& rpc = std::get<ProgramConfig>(rx);
      StepResult rr = step(rpc, c_.linked);
      CompositeStep st = composite_step(c_, cur, b_);
      if (st.status != NodeStatus::Live) {
        if (st.detail.find("rejected") != std::string::npos) {
          fail(0, cur, st.detail);
        } else {
          bool ok = rr.kind == StepResult::Kind::Crash || rr.kind == StepResult::Kind::Divergent;
          expect(1, ok, cur, "composite stops (" + st.detail + ") but the translation does not");
        }
        return;
      }
      const CompositeSuccessor& s = st.next.front();
      SlsState ry = translate_R(s.next);
      if (s.rule == 1) {
        bool ok = rr.kind == StepResult::Kind::Internal && state_equal(SlsState(rr.next), ry);
        expect(1, ok, cur, "internal step not mirrored: expected " + render(ry));
        if (rr.kind == StepResult::Kind::Internal) expect(2, ok, cur, "translation steps to a different state");
        cur = s.next;
        continue;
      }
      if (s.tau) {
        expect(0, state_equal(rx, ry), cur, "internal synchronisation changes the translation to " + render(ry));
        return;
      }
      const NameSet K = stitched_conts(cur);
      bool ok = rr.is_boundary();
      Emission em;
      if (ok) {
        em = emit_boundary(rpc, rr, &K);
        ok = em.label == s.label && state_equal(SlsState(em.next), ry);
      }
      std::string why = "program boundary " + render(s.label) + " not mirrored" +
                        (rr.is_boundary() ? ": translation emits " + render(em.label) : std::string());
      expect(3, ok, cur, why);
      if (rr.is_boundary() && support(em.label).disjoint(K)) expect(4, ok, cur, why);
      return;
    }
  }

  void check_system(const CompositeState& x) {
    SlsState rx = translate_R(x);
    const auto& rsc = std::get<SystemConfig>(rx);
    const NameSet K = stitched_conts(x);
    for (const auto& s : composite_step(c_, x, b_).next) {
      MoveOutcome y = apply_system_move(rsc, as_move(s.label), c_.linked);
      bool ok = std::holds_alternative<ProgramConfig>(y) &&
                state_equal(SlsState(std::get<ProgramConfig>(y)), translate_R(s.next));
      expect(3, ok, x, "system move " + render(s.label) + " not mirrored");
    }
    for (const auto& mv : enumerate_system_moves(rsc, c_.linked, b_)) {
      NameSet names = support(mv.value) | support(mv.store);
      names.insert(mv.k);
      if (mv.kind == MoveKind::Call) names.insert(mv.fn);
      if (!names.disjoint(K)) continue;
      auto r = composite_system_move(c_, x, mv);
      MoveOutcome y = apply_system_move(rsc, mv, c_.linked);
      bool ok = false;
      if (auto* s = std::get_if<CompositeSuccessor>(&r))
        ok = s->label == as_label(mv) && std::holds_alternative<ProgramConfig>(y) &&
             state_equal(SlsState(std::get<ProgramConfig>(y)), translate_R(s->next));
      std::string why = "translation accepts " + render(as_label(mv)) + " but the composite " +
                        (std::holds_alternative<std::string>(r) ? "rejects it: " + std::get<std::string>(r)
                                                                : std::string("disagrees"));
      expect(4, ok, x, why);
    }
  }

  const Composition& c_;
  const MoveBudget& b_;
  CompositionReport& r_;
};

}  // namespace

CompositionReport check_composition(const Composition& c, const ResolvedModule& syntactic, const MoveBudget& b) {
  CompositionReport r;
  CompositeLts lts = explore_composite(c, b);
  r.states = lts.states.size();
  r.edges = lts.graph.edge_count();
  ItemChecker items(c, b, r);
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    LemmaReport lemma = check_state_lemma(lts.states[i]);
    ++r.lemma_states;
    if (!lemma.holds()) {
      ++r.lemma_failures;
      if (r.first_lemma_failure.empty()) r.first_lemma_failure = lemma.failures() + "\n  in " + render(lts.states[i]);
    }
    if (lts.graph.nodes[i].expanded) items.check(lts.states[i]);
  }
  SlsLts syn = explore(syntactic, b);
  r.bisim = bisim_lts(lts.graph, syn.graph, true);
  return r;
}

ComposedSources compose_sources(const SourceModule& a, const SourceModule& b, ComposeFaults faults) {
  SymbolTable table;
  ResolvedModule left = resolve_and_desugar(a, table);
  ResolvedModule right = resolve_and_desugar(b, table);
  ResolvedModule syntactic = resolve_and_desugar(syntactic_compose(a, b), table);
  return {make_composition(left, right, faults), std::move(syntactic)};
}

}  // namespace sysgame
