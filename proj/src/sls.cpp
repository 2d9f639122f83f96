#include "sysgame/sls.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace sysgame {

NameSet support(const SystemConfig& c) { return c.used | c.pub | support(c.store); }

SystemConfig apply_perm(const Permutation& pi, const SystemConfig& c) {
  return {apply_perm(pi, c.used), apply_perm(pi, c.pub), apply_perm(pi, c.store)};
}

std::string render(const SystemConfig& c) {
  return "<<" + c.used.str() + " | " + c.pub.str() + " |- {" + render(c.store) + "}>>";
}

bool state_equal(const SlsState& a, const SlsState& b) {
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<SystemConfig>(&a)) return *s == std::get<SystemConfig>(b);
  return config_equal(std::get<ProgramConfig>(a), std::get<ProgramConfig>(b));
}

NameSet support(const SlsState& x) {
  return std::visit([](const auto& c) { return support(c); }, x);
}

SlsState apply_perm(const Permutation& pi, const SlsState& x) {
  return std::visit([&](const auto& c) -> SlsState { return apply_perm(pi, c); }, x);
}

std::string render(const SlsState& x) {
  return std::visit([](const auto& c) { return render(c); }, x);
}

const NameSet& public_names(const SlsState& x) {
  return std::visit([](const auto& c) -> const NameSet& { return c.pub; }, x);
}

const NameSet& used_names(const SlsState& x) {
  return std::visit([](const auto& c) -> const NameSet& { return c.used; }, x);
}

const Store& state_store(const SlsState& x) {
  return std::visit([](const auto& c) -> const Store& { return c.store; }, x);
}

NameSet support(const Label& l) {
  NameSet out = support(l.value) | support(l.store);
  out.insert(l.k);
  if (l.kind == MoveKind::Call) out.insert(l.fn);
  return out;
}

Label apply_perm(const Permutation& pi, const Label& l) {
  Label out = l;
  out.fn = pi(l.fn);
  out.value = apply_perm(pi, l.value);
  out.k = pi(l.k);
  out.store = apply_perm(pi, l.store);
  return out;
}

std::string render(const Label& l) {
  std::string out = l.dir == Direction::PS ? "P->S " : "S->P ";
  if (l.kind == MoveKind::Call) out += "call " + l.fn.str() + " " + l.value.str() + ", " + l.k.str();
  else out += "ret " + l.value.str() + ", " + l.k.str();
  return out + " | {" + render(l.store) + "}";
}

Label as_label(const SystemMove& mv) {
  Label l;
  l.dir = Direction::SP;
  l.kind = mv.kind;
  l.fn = mv.fn;
  l.value = mv.value;
  l.k = mv.k;
  l.store = mv.store;
  return l;
}

SystemMove as_move(const Label& l) { return {l.kind, l.fn, l.value, l.k, l.store}; }

const char* move_error_name(MoveErrorKind k) {
  switch (k) {
    case MoveErrorKind::GuessedPrivateName: return "GuessedPrivateName";
    case MoveErrorKind::UnknownContinuation: return "UnknownContinuation";
    case MoveErrorKind::PrivateStoreTampering: return "PrivateStoreTampering";
    case MoveErrorKind::MissingPublicFrame: return "MissingPublicFrame";
    case MoveErrorKind::ContinuationInStore: return "ContinuationInStore";
    case MoveErrorKind::UndefinedFunction: return "UndefinedFunction";
    case MoveErrorKind::UnboundFreshLocation: return "UnboundFreshLocation";
    case MoveErrorKind::StoredContinuationReused: return "StoredContinuationReused";
    case MoveErrorKind::IllSortedMove: return "IllSortedMove";
  }
  return "?";
}

std::string MoveError::explanation() const {
  std::string who = names.empty() ? std::string("the name") : names.str();
  switch (kind) {
    case MoveErrorKind::GuessedPrivateName:
      return who + (names.size() > 1 ? " are" : " is") + " private: the System cannot guess private names";
    case MoveErrorKind::UnknownContinuation:
      return who + " is not a continuation the Program has disclosed, so the System has nothing to return to";
    case MoveErrorKind::PrivateStoreTampering:
      return who + (names.size() > 1 ? " are" : " is") +
             " private: the System cannot write to locations it does not know";
    case MoveErrorKind::MissingPublicFrame:
      return "the System knows " + who + " and must keep it in its store update";
    case MoveErrorKind::ContinuationInStore:
      return "the System cannot place continuations in the Program's store";
    case MoveErrorKind::UndefinedFunction:
      return who + " is not defined by the module, so the System cannot call it";
    case MoveErrorKind::UnboundFreshLocation:
      return "the fresh location " + who + " handed to the Program needs a value in the store update";
    case MoveErrorKind::StoredContinuationReused:
      return who + " already names a stored continuation; a System call needs a new one";
    case MoveErrorKind::IllSortedMove: return "the move uses a name of the wrong sort: " + message;
  }
  return message;
}

SystemConfig initial_config(const ResolvedModule& m) {
  SystemConfig c;
  c.used = m.static_names();
  c.pub = m.exports | m.imports;
  for (const auto& [a, v] : m.init_store) c.store.set(a, v);
  return c;
}

Emission emit_boundary(const ProgramConfig& c, const StepResult& r, const NameSet* avoid) {
  if (!r.is_boundary()) throw std::invalid_argument("emit_boundary: result is not a boundary");
  Emission out;
  NameSet disclosed = location_closure(c.store, c.pub | support(r.value));
  out.label.dir = Direction::PS;
  out.label.value = r.value;
  out.label.store = restrict_to(c.store, disclosed.locations());
  out.next.used = c.used;
  out.next.store = c.store;
  if (r.kind == StepResult::Kind::SystemCall) {
    NameSet taken = avoid ? (c.used | *avoid) : c.used;
    Name k = fresh(Sort::Continuation, taken);
    out.next.store.set_cont(k, {r.frames, r.k});
    out.next.used.insert(k);
    disclosed.insert(k);
    out.label.kind = MoveKind::Call;
    out.label.fn = r.fn;
    out.label.k = k;
  } else {
    out.label.kind = MoveKind::Ret;
    out.label.k = r.k;
  }
  out.next.pub = disclosed;
  return out;
}

namespace {

MoveError move_error(MoveErrorKind kind, NameSet names, std::string message) {
  return {kind, std::move(names), std::move(message)};
}

}  // namespace

MoveOutcome apply_system_move(const SystemConfig& sc, const SystemMove& mv, const ResolvedModule& m) {
  bool call = mv.kind == MoveKind::Call;
  if (!mv.k.is_continuation())
    return move_error(MoveErrorKind::IllSortedMove, {mv.k}, mv.k.str() + " is not a continuation name");
  if (call && !mv.fn.is_function())
    return move_error(MoveErrorKind::IllSortedMove, {mv.fn}, mv.fn.str() + " is not a function name");
  if (!mv.store.continuations().empty())
    return move_error(MoveErrorKind::ContinuationInStore, mv.store.domain().continuations(),
                      "store update binds continuations");

  const NameSet priv = sc.used - sc.pub;
  NameSet tampered = mv.store.domain() & priv;
  if (!tampered.empty())
    return move_error(MoveErrorKind::PrivateStoreTampering, tampered,
                      "store update writes private locations " + tampered.str());

  NameSet carried = support(mv.value) | support(mv.store);
  NameSet mentioned = carried;
  mentioned.insert(mv.k);
  if (call) mentioned.insert(mv.fn);
  NameSet guessed = mentioned & priv;
  if (!guessed.empty())
    return move_error(MoveErrorKind::GuessedPrivateName, guessed, "move mentions private names " + guessed.str());

  const Continuation* resumed = nullptr;
  if (call) {
    if (!lookup_def(mv.fn, m))
      return move_error(MoveErrorKind::UndefinedFunction, {mv.fn}, mv.fn.str() + " has no definition");
    if (!sc.pub.contains(mv.fn))
      return move_error(MoveErrorKind::GuessedPrivateName, {mv.fn}, mv.fn.str() + " is not public");
    if (sc.store.contains(mv.k))
      return move_error(MoveErrorKind::StoredContinuationReused, {mv.k}, mv.k.str() + " is in dom(s)");
  } else {
    resumed = sc.store.get_cont(mv.k);
    if (!resumed || !sc.pub.contains(mv.k))
      return move_error(MoveErrorKind::UnknownContinuation, {mv.k}, mv.k.str() + " is not a stored continuation");
  }

  NameSet unbound = support(mv.value).locations() - support(mv.store);
  if (!unbound.empty())
    return move_error(MoveErrorKind::UnboundFreshLocation, unbound,
                      "locations " + unbound.str() + " in the value are absent from the update");
  Store visible = restrict_to(sc.store, sc.pub.locations());
  if (!extends(visible, mv.store)) {
    NameSet missing = visible.domain() - mv.store.domain();
    return move_error(MoveErrorKind::MissingPublicFrame, missing, "update omits public locations " + missing.str());
  }

  ProgramConfig out;
  out.used = sc.used | carried;
  out.pub = sc.pub | carried;
  out.store = update(sc.store, mv.store);
  out.control = ex::val(mv.value);
  if (call) {
    out.used.insert(mv.k);
    out.pub.insert(mv.k);
    out.frames = {Frame::app_right(Value::name(mv.fn))};
    out.ret_cont = mv.k;
  } else {
    out.frames = resumed->frames;
    out.ret_cont = resumed->next;
  }
  return out;
}

std::vector<Value> enumerate_values(const std::vector<Value>& atoms, const std::vector<Name>& fresh_names,
                                    std::size_t max_width) {
  std::vector<Value> out;
  std::vector<Value> current;
  auto fresh_rank = [&](const Value& a) -> int {
    if (!a.is_name()) return -1;
    auto it = std::find(fresh_names.begin(), fresh_names.end(), a.as_name());
    return it == fresh_names.end() ? -1 : static_cast<int>(it - fresh_names.begin());
  };
  auto rec = [&](auto& self, std::size_t width, int fresh_used) -> void {
    if (current.size() == width) {
      out.push_back(Value::tuple(current));
      return;
    }
    for (const auto& a : atoms) {
      int rank = fresh_rank(a);
      if (rank > fresh_used) continue;
      current.push_back(a);
      self(self, width, rank == fresh_used ? fresh_used + 1 : fresh_used);
      current.pop_back();
    }
  };
  for (std::size_t w = 0; w <= max_width; ++w) rec(rec, w, 0);
  return out;
}

std::vector<SystemMove> enumerate_system_moves(const SystemConfig& sc, const ResolvedModule& m,
                                               const MoveBudget& b) {
  std::vector<SystemMove> out;
  std::vector<Name> call_targets;
  for (const auto& f : sc.pub.functions())
    if (lookup_def(f, m)) call_targets.push_back(f);
  std::vector<Name> ret_targets;
  for (const auto& [k, _] : sc.store.continuations())
    if (sc.pub.contains(k)) ret_targets.push_back(k);
  if (call_targets.empty() && ret_targets.empty()) return out;

  NameSet taken = sc.used;
  std::vector<Name> fresh_locs;
  for (std::size_t i = 0; i < b.max_fresh_locs; ++i) {
    Name a = fresh(Sort::Location, taken);
    taken.insert(a);
    fresh_locs.push_back(a);
  }
  std::vector<Value> atoms;
  for (auto n : b.int_pool) atoms.push_back(Value::integer(n));
  for (const auto& a : sc.pub.locations()) atoms.push_back(Value::name(a));
  for (const auto& f : sc.pub.functions()) atoms.push_back(Value::name(f));
  for (const auto& a : fresh_locs) atoms.push_back(Value::name(a));
  std::vector<Value> values = enumerate_values(atoms, fresh_locs, b.max_tuple_width);

  Store visible = restrict_to(sc.store, sc.pub.locations());
  std::vector<Name> writable;
  for (const auto& [a, _] : visible.locations()) writable.push_back(a);

  auto stores_for = [&](const Value& v) {
    std::vector<Name> slots = writable;
    for (const auto& a : support(v).locations())
      if (std::find(fresh_locs.begin(), fresh_locs.end(), a) != fresh_locs.end()) slots.push_back(a);
    std::vector<Store> stores{visible};
    for (const auto& a : slots) {
      std::vector<Store> next;
      auto current = visible.get(a);
      for (const auto& s : stores) {
        if (current) next.push_back(s);
        for (auto n : b.int_pool) {
          if (current && *current == Value::integer(n)) continue;
          Store t = s;
          t.set(a, Value::integer(n));
          next.push_back(std::move(t));
        }
      }
      stores = std::move(next);
    }
    return stores;
  };

  Name k_new = fresh(Sort::Continuation, sc.used);
  for (const auto& f : call_targets)
    for (const auto& v : values)
      for (auto& s : stores_for(v)) out.push_back({MoveKind::Call, f, v, k_new, std::move(s)});
  for (const auto& k : ret_targets)
    for (const auto& v : values)
      for (auto& s : stores_for(v)) out.push_back({MoveKind::Ret, Name{}, v, k, std::move(s)});
  return out;
}

ReplayResult replay(const ResolvedModule& m, const std::vector<SystemMove>& script, std::size_t fuel) {
  ReplayResult out;
  SystemConfig sc = initial_config(m);
  out.final_state = sc;
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (!std::holds_alternative<SystemConfig>(out.final_state)) {
      out.error = ReplayError{ReplayErrorKind::ScriptAtWrongTurn, i, std::nullopt,
                              "move " + std::to_string(i + 1) + " arrives after the Program stopped"};
      return out;
    }
    const auto& current = std::get<SystemConfig>(out.final_state);
    MoveOutcome applied = apply_system_move(current, script[i], m);
    if (auto* err = std::get_if<MoveError>(&applied)) {
      out.error = ReplayError{ReplayErrorKind::InvalidMove, i, *err,
                              "move " + std::to_string(i + 1) + " rejected: " + move_error_name(err->kind) + ": " +
                                  err->explanation()};
      return out;
    }
    ProgramConfig pc = std::get<ProgramConfig>(std::move(applied));
    out.trace.push_back(as_label(script[i]));
    out.public_after.push_back(pc.pub);
    RunResult run = run_to_boundary(pc, m, fuel);
    if (!run.result.is_boundary()) {
      out.final_state = run.last;
      bool crashed = run.result.kind == StepResult::Kind::Crash;
      std::string what = crashed ? std::string("crash ") + crash_reason_name(run.result.reason) : "divergence";
      out.error = ReplayError{crashed ? ReplayErrorKind::Crash : ReplayErrorKind::Divergent, i, std::nullopt,
                              "program stopped after move " + std::to_string(i + 1) + ": " + what + ": " +
                                  run.result.detail};
      return out;
    }
    Emission em = emit_boundary(run.last, run.result);
    out.trace.push_back(em.label);
    out.public_after.push_back(em.next.pub);
    out.final_state = em.next;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

class Renamer {
 public:
  explicit Renamer(const NameSet& pinned) : pinned_(pinned) {}

  void visit(const Name& n) {
    if (pinned_.contains(n) || map_.count(n)) return;
    auto& next = next_[static_cast<int>(n.sort)];
    Name target{n.sort, next};
    while (pinned_.contains(target)) target.index = ++next;
    ++next;
    map_.emplace(n, target);
    order_.push_back(n);
  }

  bool seen(const Name& n) const { return pinned_.contains(n) || map_.count(n); }
  Name target(const Name& n) const {
    auto it = map_.find(n);
    return it == map_.end() ? n : it->second;
  }
  const std::vector<Name>& order() const { return order_; }
  Permutation permutation() const { return Permutation::from_partial(map_); }

 private:
  const NameSet& pinned_;
  std::map<Name, Name> map_;
  std::vector<Name> order_;
  std::uint32_t next_[3] = {0, 0, 0};
};

void walk_stores(const std::vector<const Store*>& stores, std::deque<Name> queue, Renamer& r, NameSet& walked) {
  auto visit = [&](const Name& n) {
    r.visit(n);
    if (walked.insert(n)) queue.push_back(n);
  };
  while (!queue.empty()) {
    Name a = queue.front();
    queue.pop_front();
    for (const Store* s : stores) {
      if (a.is_location()) {
        if (auto v = s->get(a))
          for (const auto& atom : v->atoms())
            if (atom.is_name()) visit(atom.as_name());
      } else if (a.is_continuation()) {
        if (const auto* c = s->get_cont(a)) {
          visit_names(c->frames, visit);
          visit(c->next);
        }
      }
    }
  }
}

// Shape of the bindings reachable from a, with names not yet renamed replaced
// by their position in a local depth-first numbering.
void shape_of(const std::vector<const Store*>& stores, const Name& a, const Renamer& r,
              std::map<Name, std::size_t>& local, std::string& out) {
  auto name = [&](const Name& n) {
    if (r.seen(n)) {
      out += r.target(n).str();
      return;
    }
    if (auto it = local.find(n); it != local.end()) {
      out += "#" + std::to_string(it->second);
      return;
    }
    out += "(";
    shape_of(stores, n, r, local, out);
    out += ")";
  };
  local.emplace(a, local.size());
  out += sort_prefix(a.sort);
  out += ":";
  for (const Store* s : stores) {
    if (a.is_location()) {
      if (auto v = s->get(a))
        for (const auto& atom : v->atoms()) {
          if (atom.is_name()) name(atom.as_name());
          else out += atom.str();
          out += ",";
        }
    } else if (const auto* c = s->get_cont(a)) {
      out += std::to_string(c->frames.size()) + ":";
      visit_names(c->frames, [&](const Name& n) {
        name(n);
        out += ",";
      });
      name(c->next);
    }
    out += "|";
  }
}

std::string shape_of(const std::vector<const Store*>& stores, const Name& a, const Renamer& r) {
  std::map<Name, std::size_t> local;
  std::string out;
  shape_of(stores, a, r, local, out);
  return out;
}

}  // namespace

Permutation canonical_renaming(const std::vector<Name>& seeds, const NameSet& roots,
                               const std::vector<const Store*>& stores, const NameSet& rest, const NameSet& pinned) {
  Renamer r(pinned);
  std::deque<Name> queue;
  NameSet walked;
  for (const auto& n : seeds) {
    r.visit(n);
    if (walked.insert(n)) queue.push_back(n);
  }
  for (const auto& n : roots)
    if (walked.insert(n)) queue.push_back(n);
  walk_stores(stores, std::move(queue), r, walked);

  NameSet domain;
  for (const Store* s : stores) domain.insert_all(s->domain());
  // Unreachable bindings: unreferenced ones first, ordered by shape.
  NameSet referenced;
  for (const auto& a : domain) {
    if (walked.contains(a)) continue;
    auto mark = [&](const Name& n) {
      if (n != a) referenced.insert(n);
    };
    for (const Store* s : stores) {
      if (a.is_location()) {
        if (auto v = s->get(a))
          for (const auto& atom : v->atoms())
            if (atom.is_name()) mark(atom.as_name());
      } else if (const auto* c = s->get_cont(a)) {
        visit_names(c->frames, mark);
        mark(c->next);
      }
    }
  }
  std::vector<std::tuple<bool, std::string, Name>> leftovers;
  for (const auto& a : domain)
    if (!walked.contains(a)) leftovers.emplace_back(referenced.contains(a), shape_of(stores, a, r), a);
  std::sort(leftovers.begin(), leftovers.end());
  for (const auto& [_, shape, a] : leftovers) {
    if (walked.contains(a)) continue;
    r.visit(a);
    walked.insert(a);
    walk_stores(stores, std::deque<Name>{a}, r, walked);
  }
  for (const auto& n : rest) r.visit(n);
  return r.permutation();
}

Canonical canonicalize(const SlsState& x, const NameSet& pinned_extra) {
  std::vector<Name> seeds;
  if (const auto* pc = std::get_if<ProgramConfig>(&x)) {
    auto seed = [&](const Name& n) { seeds.push_back(n); };
    visit_names(pc->control, seed);
    visit_names(pc->frames, seed);
    seed(pc->ret_cont);
  }
  Permutation pi = canonical_renaming(seeds, public_names(x), {&state_store(x)}, used_names(x),
                                      pinned_extra | public_names(x));
  Canonical out{apply_perm(pi, x), pi.inverse(), ""};
  out.key = render(out.state);
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

std::size_t Lts::edge_count() const {
  std::size_t n = 0;
  for (const auto& edges : out) n += edges.size();
  return n;
}

std::vector<const LtsEdge*> Lts::path_to(std::size_t node) const {
  std::vector<const LtsEdge*> path;
  for (std::ptrdiff_t v = static_cast<std::ptrdiff_t>(node); nodes[v].parent >= 0; v = nodes[v].parent)
    path.push_back(&out[nodes[v].parent][nodes[v].parent_edge]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<SystemMove> script_to(const Lts& lts, std::size_t node) {
  std::vector<SystemMove> script;
  for (const auto* e : lts.path_to(node))
    if (!e->tau && e->label.dir == Direction::SP) script.push_back(as_move(e->label));
  return script;
}

namespace {

struct Successor {
  Label label;
  SlsState state;
};

struct Expansion {
  NodeStatus status = NodeStatus::Live;
  std::string detail;
  std::vector<Successor> next;
};

Expansion expand(const SlsState& x, const ResolvedModule& m, const MoveBudget& b) {
  Expansion out;
  if (const auto* sc = std::get_if<SystemConfig>(&x)) {
    for (const auto& mv : enumerate_system_moves(*sc, m, b)) {
      MoveOutcome r = apply_system_move(*sc, mv, m);
      if (auto* err = std::get_if<MoveError>(&r))
        throw std::logic_error("enumerated move rejected: " + err->message);
      out.next.push_back({as_label(mv), std::get<ProgramConfig>(std::move(r))});
    }
    return out;
  }
  const auto& pc = std::get<ProgramConfig>(x);
  RunResult run = run_to_boundary(pc, m, b.fuel);
  if (run.result.is_boundary()) {
    Emission em = emit_boundary(run.last, run.result);
    out.next.push_back({em.label, em.next});
  } else if (run.result.kind == StepResult::Kind::Crash) {
    out.status = NodeStatus::Crashed;
    out.detail = std::string(crash_reason_name(run.result.reason)) + ": " + run.result.detail;
  } else {
    out.status = NodeStatus::Diverged;
    out.detail = run.result.detail;
  }
  return out;
}

}  // namespace

SlsLts explore(const ResolvedModule& m, const MoveBudget& b, const ExploreOptions& opts) {
  SlsLts out;
  out.graph.max_depth = b.max_depth;
  const NameSet pinned = m.static_names();
  std::unordered_map<std::string, std::size_t> index;

  auto add = [&](SlsState state, std::size_t depth, std::ptrdiff_t parent, std::size_t parent_edge) {
    Canonical c = canonicalize(state, pinned);
    auto [it, inserted] = index.emplace(std::move(c.key), out.states.size());
    if (!inserted) return std::make_pair(it->second, false);
    LtsNode node;
    node.pub = public_names(state);
    node.depth = depth;
    node.parent = parent;
    node.parent_edge = parent_edge;
    out.graph.nodes.push_back(std::move(node));
    out.graph.out.emplace_back();
    out.states.push_back(std::move(state));
    return std::make_pair(it->second, true);
  };

  add(initial_config(m), 0, -1, 0);
  std::vector<std::size_t> frontier{0};
  for (std::size_t depth = 0; depth < b.max_depth && !frontier.empty(); ++depth) {
    std::vector<Expansion> expansions(frontier.size());
    std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, frontier.size()));
    if (jobs == 1) {
      for (std::size_t i = 0; i < frontier.size(); ++i) expansions[i] = expand(out.states[frontier[i]], m, b);
    } else {
      std::vector<std::future<void>> workers;
      for (std::size_t j = 0; j < jobs; ++j)
        workers.push_back(std::async(std::launch::async, [&, j] {
          for (std::size_t i = j; i < frontier.size(); i += jobs)
            expansions[i] = expand(out.states[frontier[i]], m, b);
        }));
      for (auto& w : workers) w.get();
    }
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      std::size_t from = frontier[i];
      out.graph.nodes[from].expanded = true;
      out.graph.nodes[from].status = expansions[i].status;
      out.graph.nodes[from].detail = expansions[i].detail;
      for (auto& succ : expansions[i].next) {
        std::size_t edge = out.graph.out[from].size();
        auto [to, inserted] = add(std::move(succ.state), depth + 1, static_cast<std::ptrdiff_t>(from), edge);
        out.graph.out[from].push_back({to, false, std::move(succ.label)});
        if (inserted) next.push_back(to);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace sysgame
