#include "sysgame/bisim.hpp"

#include <algorithm>
#include <deque>
#include <tuple>
#include <unordered_map>

namespace sysgame {

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::BisimilarUpTo: return "BisimilarUpTo";
    case Verdict::Kind::Distinguished: return "Distinguished";
    case Verdict::Kind::InterfaceMismatch: return "InterfaceMismatch";
  }
  return "?";
}

std::string abstract_label(const Label& l, const NameSet& pub, const std::map<Name, Name>* sigma,
                           std::vector<Name>* fresh_out) {
  std::map<Name, std::size_t> placeholder;
  std::vector<Name> order;
  auto mapped = [&](const Name& n) -> Name {
    if (!sigma) return n;
    auto it = sigma->find(n);
    return it == sigma->end() ? n : it->second;
  };
  auto name_str = [&](const Name& n) -> std::string {
    if (pub.contains(n)) return mapped(n).str();
    auto [it, inserted] = placeholder.emplace(n, order.size());
    if (inserted) order.push_back(n);
    return std::string("#") + sort_prefix(n.sort) + std::to_string(it->second);
  };
  auto atom_str = [&](const Value& a) { return a.is_int() ? std::to_string(a.as_int()) : name_str(a.as_name()); };

  std::string out = l.dir == Direction::PS ? "PS " : "SP ";
  out += l.kind == MoveKind::Call ? "call " + name_str(l.fn) : std::string("ret");
  out += " (";
  for (const auto& a : l.value.atoms()) out += atom_str(a) + ",";
  out += ") " + name_str(l.k) + " {";

  // Placeholders in the store are numbered by reachability from the value,
  // then from public names in mapped order.
  std::deque<Name> queue(order.begin(), order.end());
  std::vector<Name> pub_keys;
  for (const auto& [a, _] : l.store.locations())
    if (pub.contains(a)) pub_keys.push_back(a);
  std::sort(pub_keys.begin(), pub_keys.end(), [&](const Name& x, const Name& y) { return mapped(x) < mapped(y); });
  queue.insert(queue.end(), pub_keys.begin(), pub_keys.end());
  NameSet walked(std::vector<Name>(queue.begin(), queue.end()));
  auto walk = [&] {
    while (!queue.empty()) {
      Name a = queue.front();
      queue.pop_front();
      auto v = l.store.get(a);
      if (!v || !v->is_name()) continue;
      name_str(v->as_name());
      if (walked.insert(v->as_name())) queue.push_back(v->as_name());
    }
  };
  walk();
  // Unreached entries: unreferenced ones first, ordered by the shape of the chain they start.
  NameSet referenced;
  for (const auto& [a, v] : l.store.locations())
    if (!walked.contains(a) && v.is_name() && v.as_name() != a) referenced.insert(v.as_name());
  auto shape = [&](Name a) {
    std::map<Name, std::size_t> local;
    std::string out;
    while (true) {
      auto [it, inserted] = local.emplace(a, local.size());
      if (!inserted || walked.contains(a)) {
        out += inserted ? name_str(a) : "#" + std::to_string(it->second);
        break;
      }
      auto v = l.store.get(a);
      if (!v) break;
      if (!v->is_name()) {
        out += v->str();
        break;
      }
      out += "->";
      a = v->as_name();
    }
    return out;
  };
  std::vector<std::tuple<bool, std::string, Name>> rest;
  for (const auto& [a, v] : l.store.locations())
    if (!walked.contains(a)) rest.emplace_back(referenced.contains(a), shape(a), a);
  std::sort(rest.begin(), rest.end());
  for (const auto& [ref, sh, a] : rest) {
    if (walked.contains(a)) continue;
    name_str(a);
    walked.insert(a);
    queue.push_back(a);
    walk();
  }
  std::vector<std::string> entries;
  for (const auto& [a, v] : l.store.locations()) entries.push_back(name_str(a) + "=" + atom_str(v));
  std::sort(entries.begin(), entries.end());
  for (const auto& e : entries) out += e + ",";
  out += "}";
  if (fresh_out) *fresh_out = order;
  return out;
}

namespace {

using Sigma = std::map<Name, Name>;

struct Candidate {
  std::size_t triple;
  std::vector<const LtsEdge*> seg_left, seg_right;
};

struct Obligation {
  Side side;
  const LtsEdge* edge;
  std::vector<Candidate> candidates;
};

struct EdgeInfo {
  const LtsEdge* edge;
  std::string abs;
  std::vector<Name> fresh;
};

struct Triple {
  std::size_t u, v;
  Sigma sigma;
  std::size_t p;
  bool bad = false;
  std::string reason;
  Side bad_side = Side::Left;
  std::optional<Label> unmatched;
  std::vector<Obligation> obligations;
};

class Checker {
 public:
  Checker(const Lts& left, const Lts& right, bool weak)
      : l_(left), r_(right), weak_(weak), max_depth_(std::min(left.max_depth, right.max_depth)) {}

  Verdict run() {
    Verdict out;
    out.depth = max_depth_;
    Sigma id;
    for (const auto& n : l_.nodes[0].pub) id[n] = n;
    add(0, 0, id, 0, true);
    while (!queue_.empty()) {
      std::size_t t = queue_.front();
      queue_.pop_front();
      expand(t);
    }
    std::vector<int> died(triples_.size(), -1);
    for (std::size_t t = 0; t < triples_.size(); ++t)
      if (triples_[t].bad) died[t] = 0;
    for (int round = 1;; ++round) {
      bool changed = false;
      for (std::size_t t = 0; t < triples_.size(); ++t) {
        if (died[t] >= 0) continue;
        for (const auto& ob : triples_[t].obligations) {
          bool ok = std::any_of(ob.candidates.begin(), ob.candidates.end(),
                                [&](const Candidate& c) { return died[c.triple] < 0 || died[c.triple] == round; });
          if (!ok) {
            died[t] = round;
            changed = true;
            break;
          }
        }
      }
      if (!changed) break;
    }
    out.pairs = triples_.size();
    if (died[0] < 0) {
      out.kind = Verdict::Kind::BisimilarUpTo;
      out.message = "no distinguishing run within " + std::to_string(max_depth_) + " labels";
      return out;
    }
    out.kind = Verdict::Kind::Distinguished;
    out.witness = witness(died);
    out.message = out.witness->reason;
    return out;
  }

 private:
  std::vector<std::size_t> closure(const Lts& g, std::size_t x) const {
    std::vector<std::size_t> out{x};
    if (!weak_) return out;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& e : g.out[out[i]])
        if (e.tau && std::find(out.begin(), out.end(), e.to) == out.end()) out.push_back(e.to);
    return out;
  }

  static std::string sigma_key(const Sigma& s) {
    std::string key;
    for (const auto& [a, b] : s) key += a.str() + ">" + b.str() + ",";
    return key;
  }

  std::size_t add(std::size_t u, std::size_t v, const Sigma& sigma, std::size_t p, bool front) {
    std::string key = std::to_string(u) + "|" + std::to_string(v) + "|" + sigma_key(sigma);
    auto [it, inserted] = index_.emplace(std::move(key), triples_.size());
    if (!inserted) return it->second;
    Triple t;
    t.u = u;
    t.v = v;
    t.sigma = sigma;
    t.p = p;
    // Same public names up to sigma.
    std::vector<Name> image;
    for (const auto& n : l_.nodes[u].pub) {
      auto s = sigma.find(n);
      if (s == sigma.end()) {
        t.bad = true;
        t.reason = "public name " + n.str() + " of the left state has no counterpart";
        break;
      }
      image.push_back(s->second);
    }
    if (!t.bad && NameSet(image) != r_.nodes[v].pub) {
      t.bad = true;
      t.reason = "public names differ: " + l_.nodes[u].pub.str() + " vs " + r_.nodes[v].pub.str();
    }
    triples_.push_back(std::move(t));
    if (front) queue_.push_front(triples_.size() - 1);
    else queue_.push_back(triples_.size() - 1);
    return triples_.size() - 1;
  }

  bool expanded(const Lts& g, const std::vector<std::size_t>& nodes) const {
    return std::all_of(nodes.begin(), nodes.end(), [&](std::size_t x) { return g.nodes[x].expanded; });
  }

  void expand(std::size_t t) {
    if (triples_[t].bad || triples_[t].p >= max_depth_) return;
    const std::size_t u = triples_[t].u, v = triples_[t].v, p = triples_[t].p;
    const Sigma sigma = triples_[t].sigma;
    auto cu = closure(l_, u), cv = closure(r_, v);
    if (!expanded(l_, cu) || !expanded(r_, cv)) return;
    std::vector<Obligation> obligations;

    // Abstract labels of visible edges: right side cached, left side under sigma.
    std::unordered_multimap<std::string, std::pair<std::size_t, const EdgeInfo*>> left_index;
    std::vector<std::vector<EdgeInfo>> left_infos;
    for (auto u1 : cu) {
      auto& infos = left_infos.emplace_back();
      for (const auto& f : l_.out[u1]) {
        if (f.tau) continue;
        EdgeInfo info{&f, {}, {}};
        info.abs = abstract_label(f.label, l_.nodes[u1].pub, &sigma, &info.fresh);
        infos.push_back(std::move(info));
      }
    }
    for (std::size_t i = 0; i < cu.size(); ++i)
      for (const auto& info : left_infos[i]) left_index.emplace(info.abs, std::make_pair(cu[i], &info));

    for (const auto& e : l_.out[u]) {
      Obligation ob{Side::Left, &e, {}};
      if (e.tau) {
        if (weak_) {
          for (auto v2 : cv) ob.candidates.push_back({add(e.to, v2, sigma, p, true), {&e}, tau_path(r_, v, v2)});
        } else {
          for (const auto& f : r_.out[v])
            if (f.tau) ob.candidates.push_back({add(e.to, f.to, sigma, p, true), {&e}, {&f}});
        }
      } else {
        const EdgeInfo* mine = nullptr;
        for (const auto& info : left_infos[0])
          if (info.edge == &e) mine = &info;
        for (auto v1 : cv) {
          auto [lo, hi] = right_index(v1).equal_range(mine->abs);
          for (auto it = lo; it != hi; ++it) {
            const EdgeInfo& other = *it->second;
            Sigma next = extend(sigma, mine->fresh, other.fresh);
            for (auto v2 : closure(r_, other.edge->to)) {
              auto seg = tau_path(r_, v, v1);
              seg.push_back(other.edge);
              auto tail = tau_path(r_, other.edge->to, v2);
              seg.insert(seg.end(), tail.begin(), tail.end());
              ob.candidates.push_back({add(e.to, v2, next, p + 1, false), {&e}, seg});
            }
          }
        }
      }
      obligations.push_back(std::move(ob));
    }

    for (const auto& e : r_.out[v]) {
      Obligation ob{Side::Right, &e, {}};
      if (e.tau) {
        if (weak_) {
          for (auto u2 : cu) ob.candidates.push_back({add(u2, e.to, sigma, p, true), tau_path(l_, u, u2), {&e}});
        } else {
          for (const auto& f : l_.out[u])
            if (f.tau) ob.candidates.push_back({add(f.to, e.to, sigma, p, true), {&f}, {&e}});
        }
      } else {
        const EdgeInfo* mine = nullptr;
        for (const auto& [_, info] : right_index(v))
          if (info->edge == &e) mine = info;
        auto [lo, hi] = left_index.equal_range(mine->abs);
        for (auto it = lo; it != hi; ++it) {
          auto [u1, other] = it->second;
          Sigma next = extend(sigma, other->fresh, mine->fresh);
          for (auto u2 : closure(l_, other->edge->to)) {
            auto seg = tau_path(l_, u, u1);
            seg.push_back(other->edge);
            auto tail = tau_path(l_, other->edge->to, u2);
            seg.insert(seg.end(), tail.begin(), tail.end());
            ob.candidates.push_back({add(u2, e.to, next, p + 1, false), seg, {&e}});
          }
        }
      }
      obligations.push_back(std::move(ob));
    }

    Triple& self = triples_[t];
    for (const auto& ob : obligations)
      if (ob.candidates.empty() && !self.bad) {
        self.bad = true;
        self.bad_side = ob.side;
        if (!ob.edge->tau) self.unmatched = ob.edge->label;
        std::string side = ob.side == Side::Left ? "left" : "right";
        self.reason = side + " performs " + (ob.edge->tau ? std::string("tau") : render(ob.edge->label)) +
                      ", which the other side cannot match";
      }
    self.obligations = std::move(obligations);
  }

  const std::unordered_multimap<std::string, const EdgeInfo*>& right_index(std::size_t v) {
    auto it = right_cache_.find(v);
    if (it != right_cache_.end()) return it->second.second;
    auto& slot = right_cache_[v];
    for (const auto& f : r_.out[v]) {
      if (f.tau) continue;
      EdgeInfo info{&f, {}, {}};
      info.abs = abstract_label(f.label, r_.nodes[v].pub, nullptr, &info.fresh);
      slot.first.push_back(std::move(info));
    }
    for (const auto& info : slot.first) slot.second.emplace(info.abs, &info);
    return slot.second;
  }

  static Sigma extend(const Sigma& sigma, const std::vector<Name>& a, const std::vector<Name>& b) {
    Sigma out = sigma;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) out[a[i]] = b[i];
    return out;
  }

  // τ-edges from x to y (y in the τ-closure of x).
  std::vector<const LtsEdge*> tau_path(const Lts& g, std::size_t x, std::size_t y) const {
    if (x == y) return {};
    std::map<std::size_t, std::pair<std::size_t, const LtsEdge*>> prev;
    std::deque<std::size_t> q{x};
    prev[x] = {x, nullptr};
    while (!q.empty()) {
      auto a = q.front();
      q.pop_front();
      if (a == y) break;
      for (const auto& e : g.out[a])
        if (e.tau && !prev.count(e.to)) {
          prev[e.to] = {a, &e};
          q.push_back(e.to);
        }
    }
    std::vector<const LtsEdge*> path;
    for (auto c = y; c != x; c = prev.at(c).first) path.push_back(prev.at(c).second);
    std::reverse(path.begin(), path.end());
    return path;
  }

  Witness witness(const std::vector<int>& died) const {
    Witness w;
    std::vector<const LtsEdge*> left, right;
    std::size_t t = 0;
    while (!triples_[t].bad) {
      const Candidate* next = nullptr;
      for (const auto& ob : triples_[t].obligations) {
        bool all_dead = std::all_of(ob.candidates.begin(), ob.candidates.end(), [&](const Candidate& c) {
          return died[c.triple] >= 0 && died[c.triple] < died[t];
        });
        if (!all_dead) continue;
        for (const auto& c : ob.candidates)
          if (!next || died[c.triple] < died[next->triple]) next = &c;
        break;
      }
      if (!next) break;
      left.insert(left.end(), next->seg_left.begin(), next->seg_left.end());
      right.insert(right.end(), next->seg_right.begin(), next->seg_right.end());
      t = next->triple;
    }
    const Triple& end = triples_[t];
    w.reason = end.reason;
    w.side = end.bad_side;
    w.unmatched = end.unmatched;
    auto fill = [](const std::vector<const LtsEdge*>& path, std::vector<Label>& trace,
                   std::vector<SystemMove>& script) {
      for (const auto* e : path) {
        if (e->tau) continue;
        trace.push_back(e->label);
        if (e->label.dir == Direction::SP) script.push_back(as_move(e->label));
      }
    };
    fill(left, w.trace_left, w.script_left);
    fill(right, w.trace_right, w.script_right);
    if (end.unmatched) {
      auto& trace = end.bad_side == Side::Left ? w.trace_left : w.trace_right;
      auto& script = end.bad_side == Side::Left ? w.script_left : w.script_right;
      trace.push_back(*end.unmatched);
      if (end.unmatched->dir == Direction::SP) script.push_back(as_move(*end.unmatched));
    }
    return w;
  }

  const Lts& l_;
  const Lts& r_;
  bool weak_;
  std::size_t max_depth_;
  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::size_t> index_;
  std::deque<std::size_t> queue_;
  std::unordered_map<std::size_t,
                     std::pair<std::deque<EdgeInfo>, std::unordered_multimap<std::string, const EdgeInfo*>>>
      right_cache_;
};

}  // namespace

Verdict bisim_lts(const Lts& left, const Lts& right, bool weak) {
  if (left.nodes.empty() || right.nodes.empty()) throw std::invalid_argument("bisim_lts: empty system");
  return Checker(left, right, weak).run();
}

Verdict weak_bisimilar(const Lts& left, const Lts& right) { return bisim_lts(left, right, true); }

Verdict bisimilar(const ResolvedModule& m1, const ResolvedModule& m2, const MoveBudget& b,
                  const ExploreOptions& opts) {
  if (m1.exports != m2.exports || m1.imports != m2.imports) {
    Verdict v;
    v.kind = Verdict::Kind::InterfaceMismatch;
    v.depth = b.max_depth;
    v.message = "interfaces differ: exports " + m1.exports.str() + " vs " + m2.exports.str() + ", imports " +
                m1.imports.str() + " vs " + m2.imports.str();
    return v;
  }
  SlsLts a = explore(m1, b, opts);
  SlsLts c = explore(m2, b, opts);
  return bisim_lts(a.graph, c.graph, false);
}

ResolvedPair resolve_pair(const SourceModule& a, const SourceModule& b) {
  SymbolTable table;
  ResolvedModule first = resolve_and_desugar(a, table);
  ResolvedModule second = resolve_and_desugar(b, table);
  return {std::move(first), std::move(second)};
}

CongruenceReport check_congruence(const SourceModule& m1, const SourceModule& m2, const SourceModule& c,
                                  const MoveBudget& b, const ExploreOptions& opts) {
  CongruenceReport report;
  auto hyp = resolve_pair(m1, m2);
  report.hypothesis = bisimilar(hyp.first, hyp.second, b, opts);
  if (!report.hypothesis.bisimilar()) return report;
  auto con = resolve_pair(syntactic_compose(m1, c), syntactic_compose(m2, c));
  report.conclusion = bisimilar(con.first, con.second, b, opts);
  return report;
}

}  // namespace sysgame
