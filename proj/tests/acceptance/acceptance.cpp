// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "properties.hpp"
#include "support.hpp"
#include "sysgame/bisim.hpp"
#include "sysgame/compose.hpp"
#include "sysgame/demo.hpp"

namespace {

using namespace sysgame;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20240501;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!ok) notes.push_back("failed: " + what);
  }
  void note(const std::string& what) { notes.push_back(what); }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << s << "s";
  return out.str();
}

struct Command {
  int status = -1;
  std::string output;
};

Command run_command(const std::string& cmd) {
  Command out;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.output.append(buf.data(), n);
  int raw = pclose(p);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

MoveBudget budget(std::size_t depth) {
  MoveBudget b;
  b.int_pool = {0, 1};
  b.max_fresh_locs = 1;
  b.max_tuple_width = 2;
  b.max_depth = depth;
  return b;
}

Outcome golden_attack_trace() {
  Outcome o;
  ResolvedModule m = resolve_and_desugar(parse_module(bundled_prot_source()));
  auto t0 = Clock::now();
  AttackDemo d = attack_demo();
  double elapsed = seconds_since(t0);
  o.require(d.error.empty(), "replay: " + d.error);
  o.require(d.steps.size() == 6, "six labels, got " + std::to_string(d.steps.size()));
  if (d.steps.size() != 6) return o;

  const std::array<Direction, 6> dirs{Direction::SP, Direction::PS, Direction::SP,
                                      Direction::PS, Direction::SP, Direction::PS};
  const std::array<MoveKind, 6> kinds{MoveKind::Call, MoveKind::Call, MoveKind::Ret,
                                      MoveKind::Ret,  MoveKind::Ret,  MoveKind::Ret};
  std::vector<Label> ls;
  for (const auto& s : d.steps) ls.push_back(s.label);
  for (std::size_t i = 0; i < 6; ++i) {
    o.require(ls[i].dir == dirs[i], "direction of label " + std::to_string(i + 1));
    o.require(ls[i].kind == kinds[i], "kind of label " + std::to_string(i + 1));
  }
  o.require(m.label(ls[0].fn) == "prot", "label 1 calls prot");
  o.require(m.label(ls[1].fn) == "read", "label 2 calls read");
  Name k_top = ls[0].k, k_read = ls[1].k;
  o.require(k_top != k_read, "read gets a new continuation");
  o.require(ls[2].k == k_read && ls[4].k == k_read, "system returns target the read continuation");
  o.require(ls[3].k == k_top && ls[5].k == k_top, "program returns target the top continuation");

  const NameSet& pub0 = d.steps[0].pub_after;
  o.require(ls[2].value.is_name() && !pub0.contains(ls[2].value.as_name()), "label 3 returns a fresh name");
  bool key_ok = ls[3].value.is_name() && d.steps[3].disclosed == NameSet{ls[3].value.as_name()} &&
                !d.steps[2].pub_after.contains(ls[3].value.as_name());
  o.require(key_ok, "label 4 discloses exactly the key");
  o.require(ls[4].value == ls[3].value, "label 5 replays the key");
  o.require(d.secret.has_value(), "a secret is disclosed");
  if (d.secret) {
    bool hidden = true;
    for (std::size_t i = 0; i < 5; ++i) hidden = hidden && !d.steps[i].pub_after.contains(*d.secret);
    o.require(hidden, "secret absent before the final label");
    o.require(d.steps[5].pub_after.contains(*d.secret) && ls[5].value == Value::name(*d.secret),
              "secret public after the final label");
    o.require(d.steps[5].disclosed == NameSet{*d.secret}, "final label discloses only the secret");
  }
  o.require(elapsed < 1.0, "runtime under 1s");

  auto c0 = Clock::now();
  Command cli = run_command(std::string(SYSGAME_CLI) + " attack-demo");
  double cli_elapsed = seconds_since(c0);
  o.require(cli.status == 0, "cli exit status " + std::to_string(cli.status));
  o.require(cli.output.find("secret " + (d.secret ? d.secret->str() : std::string("?")) + " disclosed at step 6") !=
                std::string::npos,
            "cli reports the secret");
  o.require(cli_elapsed < 1.0, "cli runtime under 1s");
  o.note("engine " + fmt_seconds(elapsed) + ", cli " + fmt_seconds(cli_elapsed));
  return o;
}

// No Program label discloses a location that was not public before it.
bool program_discloses_no_location(const Lts& g) {
  for (std::size_t u = 0; u < g.out.size(); ++u)
    for (const auto& e : g.out[u]) {
      if (e.tau || e.label.dir != Direction::PS) continue;
      if (!(g.nodes[e.to].pub.locations() - g.nodes[u].pub.locations()).empty()) return false;
    }
  return true;
}

Outcome equivalences() {
  Outcome o;
  const std::array<std::string, 3> files{"eq1.slc", "eq2.slc", "eq3.slc"};
  for (std::size_t i = 0; i < files.size(); ++i)
    for (std::size_t j = i + 1; j < files.size(); ++j) {
      ResolvedPair p = resolve_pair(parse_module(test::fixture_text(files[i])),
                                    parse_module(test::fixture_text(files[j])));
      auto t0 = Clock::now();
      Verdict v = bisimilar(p.first, p.second, budget(6));
      double elapsed = seconds_since(t0);
      std::string pair = files[i] + "/" + files[j];
      o.require(v.kind == Verdict::Kind::BisimilarUpTo, pair + " " + verdict_name(v.kind) + " " + v.message);
      o.require(elapsed < 60.0, pair + " runtime under 60s");
      o.note(pair + " " + std::to_string(v.pairs) + " pairs " + fmt_seconds(elapsed));
    }

  for (const std::string f : {"eq1.slc", "eq2.slc"}) {
    ResolvedModule m = test::fixture_module(f);
    SlsLts lts = explore(m, budget(6));
    o.require(program_discloses_no_location(lts.graph), f + " never discloses a location");
    NameSet statics = m.declared.locations();
    bool hidden = true;
    for (const auto& n : lts.graph.nodes) hidden = hidden && (n.pub & statics).empty();
    o.require(hidden, f + " keeps its declared locations private");
    o.note(f + " x private in " + std::to_string(lts.states.size()) + " states");
  }
  return o;
}

Outcome secrecy_inequivalence() {
  Outcome o;
  ResolvedPair p = resolve_pair(parse_module(test::fixture_text("prot.slc")),
                                parse_module(test::fixture_text("prot_variant.slc")));
  auto t0 = Clock::now();
  Verdict v = bisimilar(p.first, p.second, budget(6));
  double elapsed = seconds_since(t0);
  o.require(v.kind == Verdict::Kind::Distinguished, std::string("verdict ") + verdict_name(v.kind));
  o.require(elapsed < 60.0, "runtime under 60s");
  o.require(v.witness.has_value(), "witness present");
  if (!v.witness) return o;
  const Witness& w = *v.witness;
  const auto& script = w.side == Side::Left ? w.script_left : w.script_right;
  ReplayResult a = replay(p.first, script, 100000), b = replay(p.second, script, 100000);
  o.require(!a.error && !b.error, "witness replays on both modules");
  o.require(a.trace.size() == 6 && b.trace.size() == 6, "both replays have six labels");
  if (a.error || b.error || a.trace.size() != 6 || b.trace.size() != 6) return o;
  bool shared_prefix = true;
  for (std::size_t i = 0; i < 5; ++i) shared_prefix = shared_prefix && a.trace[i] == b.trace[i];
  o.require(shared_prefix, "replays agree on the first five labels");
  auto fresh_at_end = [](const ReplayResult& r) {
    const Label& last = r.trace.back();
    return last.value.is_name() && !r.public_after[4].contains(last.value.as_name());
  };
  auto known_at_end = [](const ReplayResult& r) {
    const Label& last = r.trace.back();
    return last.value.is_name() && r.public_after[4].contains(last.value.as_name());
  };
  bool shaped = (fresh_at_end(a) && known_at_end(b)) || (fresh_at_end(b) && known_at_end(a));
  o.require(shaped, "final disclosure is fresh on one side and already public on the other");
  o.note(std::to_string(v.pairs) + " pairs, witness depth " + std::to_string(script.size()) + " moves, " +
         fmt_seconds(elapsed));
  return o;
}

ComposedSources compose_fixtures(const std::string& a, const std::string& b, ComposeFaults faults = {}) {
  return compose_sources(parse_module(test::fixture_text(a)), parse_module(test::fixture_text(b)), faults);
}

Outcome functional_composition() {
  Outcome o;
  auto t0 = Clock::now();
  ComposedSources fg = compose_fixtures("fg_f.slc", "fg_g.slc");
  CompositionReport r = check_composition(fg.composition, fg.syntactic, budget(6));
  for (int i = 0; i < 5; ++i) {
    const ItemResult& it = r.items[i];
    std::string item = "item " + std::to_string(i + 1);
    o.require(it.checked > 0, item + " exercised");
    o.require(it.failed == 0, item + ": " + it.first_failure);
  }
  o.require(r.lemma_failures == 0, "invariants: " + r.first_lemma_failure);
  o.require(r.bisim && r.bisim->kind == Verdict::Kind::BisimilarUpTo,
            "weakly bisimilar to the syntactic composition" + (r.bisim ? ": " + r.bisim->message : std::string()));
  std::ostringstream items;
  for (int i = 0; i < 5; ++i) items << (i ? "," : "") << r.items[i].checked;
  o.note(std::to_string(r.states) + " states, items checked " + items.str() + ", " + fmt_seconds(seconds_since(t0)));

  ComposeFaults fresh;
  fresh.drop_cross_call_freshness = true;
  ComposedSources ff = compose_fixtures("fg_f.slc", "fg_g.slc", fresh);
  CompositionReport fr = check_composition(ff.composition, ff.syntactic, budget(4));
  o.require(!fr.holds(), "dropped freshness detected");

  ComposeFaults closure;
  closure.skip_closure_in_p_update = true;
  ComposedSources cf = compose_fixtures("closure.slc", "fg_g.slc", closure);
  CompositionReport cr = check_composition(cf.composition, cf.syntactic, budget(4));
  o.require(!cr.holds(), "skipped closure detected");
  o.note("faults detected: freshness " + std::string(fr.holds() ? "no" : "yes") + ", closure " +
         (cr.holds() ? "no" : "yes"));
  return o;
}

Outcome lemma_invariants() {
  Outcome o;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"fg_f.slc", "fg_g.slc"},    {"eq1.slc", "fg_g.slc"},  {"eq2.slc", "fg_g.slc"},
      {"eq3.slc", "fg_g.slc"},     {"closure.slc", "fg_g.slc"}, {"prot.slc", "reader.slc"},
      {"prot_variant.slc", "reader.slc"}};
  std::size_t total = 0;
  for (const auto& [a, b] : pairs) {
    ComposedSources cs = compose_fixtures(a, b);
    CompositeLts lts = explore_composite(cs.composition, budget(6));
    std::size_t bad = 0;
    std::string first;
    for (const auto& s : lts.states) {
      LemmaReport r = check_state_lemma(s);
      if (!r.holds() && bad++ == 0) first = r.failures();
    }
    total += lts.states.size();
    o.require(bad == 0, a + "+" + b + " " + std::to_string(bad) + " states violate: " + first);
    o.require(!lts.states.empty(), a + "+" + b + " explored");
  }
  o.note(std::to_string(total) + " composite states over " + std::to_string(pairs.size()) + " pairs");
  return o;
}

Outcome property_suites() {
  Outcome o;
  auto add = [&](const std::string& name, const props::PropResult& r) {
    o.require(r.ok(), name + ": " + std::to_string(r.failures) + "/" + std::to_string(r.cases) + " " + r.first);
    o.note(name + " " + std::to_string(r.cases) + " cases");
  };
  add("equivariance", props::equivariance(kSeed, 200));
  add("store laws", props::store_laws(kSeed, 500));
  add("epistemic soundness", props::epistemic_edges(6));
  add("trace round trip", props::trace_round_trip(6));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden-attack-trace", golden_attack_trace},       {"equivalences", equivalences},
      {"secrecy-inequivalence", secrecy_inequivalence},   {"functional-composition", functional_composition},
      {"lemma-invariants", lemma_invariants},             {"property-suites", property_suites}};
  int failed = 0;
  std::cout << "seed " << kSeed << std::endl;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << fmt_seconds(seconds_since(t0)) << ")";
    for (const auto& n : o.notes) std::cout << "; " << n;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
