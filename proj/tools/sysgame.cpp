#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sysgame/bisim.hpp"
#include "sysgame/compose.hpp"
#include "sysgame/demo.hpp"
#include "sysgame/io.hpp"
#include "sysgame/session.hpp"

using namespace sysgame;
using nlohmann::json;

namespace {

constexpr int kUsage = 64;
constexpr int kValidation = 65;
constexpr int kInternal = 70;

class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "text";
  std::uint64_t seed = 20240501;
  std::vector<std::int64_t> ints{0, 1};
  std::size_t fresh = 1;
  std::size_t width = 2;
  std::size_t depth = 6;
  std::size_t fuel = 100000;
  std::size_t jobs = 1;

  bool jsonl() const { return format == "jsonl"; }
  TraceStyle style() const { return jsonl() ? TraceStyle::Jsonl : TraceStyle::Text; }
  MoveBudget budget() const {
    MoveBudget b;
    b.int_pool = ints;
    b.max_fresh_locs = fresh;
    b.max_tuple_width = width;
    b.max_depth = depth;
    b.fuel = fuel;
    return b;
  }
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output style")->check(CLI::IsMember({"text", "jsonl"}));
  cmd->add_option("--seed", c.seed, "Seed for randomized choices");
}

void add_budget(CLI::App* cmd, Common& c) {
  cmd->add_option("--depth", c.depth, "Maximum number of labels");
  cmd->add_option("--ints", c.ints, "Integers the System may play")->delimiter(',');
  cmd->add_option("--fresh", c.fresh, "Fresh locations per System move");
  cmd->add_option("--width", c.width, "Maximum tuple width");
  cmd->add_option("--fuel", c.fuel, "Machine steps per Program turn");
  cmd->add_option("--jobs", c.jobs, "Worker threads for exploration");
}

ResolvedModule load(const std::string& path) { return resolve_and_desugar(parse_module(read_file(path))); }

Name function_named(const ResolvedModule& m, const std::string& id) {
  for (const auto& [n, s] : m.ident_of)
    if (s == id && n.is_function()) return n;
  if (auto n = parse_name(id); n && n->is_function()) return *n;
  throw ValidationFailure("no function '" + id + "' in module");
}

std::string names_with_idents(const ResolvedModule& m, const NameSet& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += m.label(n);
  }
  return out;
}

int cmd_parse(const Common& c, const std::string& file) {
  SourceModule src = parse_module(read_file(file));
  ResolvedModule m = resolve_and_desugar(src);
  if (c.jsonl()) {
    json j;
    auto named = [&](const NameSet& ns) {
      json o = json::object();
      for (const auto& n : ns) o[n.str()] = m.ident_of.count(n) ? m.ident_of.at(n) : "";
      return o;
    };
    j["exports"] = named(m.exports);
    j["imports"] = named(m.imports);
    j["declared"] = named(m.declared);
    json init = json::object();
    for (const auto& [n, v] : m.init_store) init[n.str()] = value_to_json(v);
    j["init"] = init;
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::cout << "exports:  " << names_with_idents(m, m.exports) << "\n";
  std::cout << "imports:  " << names_with_idents(m, m.imports) << "\n";
  std::cout << "declared: " << names_with_idents(m, m.declared) << "\n";
  for (const auto& [n, d] : m.defs) std::cout << "  " << m.label(n) << "(" << d.params.size() << ") = " << render(d.body) << "\n";
  for (const auto& [n, v] : m.init_store) std::cout << "  " << m.label(n) << " := " << v.str() << "\n";
  return 0;
}

int cmd_run(const Common& c, const std::string& file, const std::string& fn, const std::string& arg, bool internal) {
  ResolvedModule m = load(file);
  SystemConfig init = initial_config(m);
  SystemMove mv;
  mv.kind = MoveKind::Call;
  mv.fn = function_named(m, fn);
  mv.value = value_from_json(json::parse(arg));
  mv.k = fresh(Sort::Continuation, init.used);
  MoveOutcome r = apply_system_move(init, mv, m);
  if (auto* e = std::get_if<MoveError>(&r)) throw ValidationFailure(std::string(move_error_name(e->kind)) + ": " + e->explanation());
  std::vector<Label> trace{as_label(mv)};
  StepObserver observe;
  if (internal)
    observe = [&](const ProgramConfig& pc) {
      if (c.jsonl()) std::cout << json{{"internal", render(pc)}}.dump() << "\n";
      else std::cout << "  -> " << render(pc) << "\n";
    };
  RunResult run = run_to_boundary(std::get<ProgramConfig>(r), m, c.fuel, nullptr, observe);
  if (run.result.is_boundary()) trace.push_back(emit_boundary(run.last, run.result).label);
  std::cout << format_trace(trace, c.style());
  if (!run.result.is_boundary()) {
    std::string why = run.result.kind == StepResult::Kind::Crash ? crash_reason_name(run.result.reason) : "Divergent";
    if (c.jsonl()) std::cout << json{{"stopped", why}, {"detail", run.result.detail}}.dump() << "\n";
    else std::cout << "stopped: " << why << " " << run.result.detail << "\n";
  }
  return 0;
}

int cmd_trace(const Common& c, const std::string& file, const std::string& script) {
  ResolvedModule m = load(file);
  ReplayResult r = replay(m, parse_script(read_file(script)), c.fuel);
  std::cout << format_trace(r.trace, c.style());
  if (!c.jsonl())
    for (std::size_t i = 0; i < r.public_after.size(); ++i) std::cout << "public after " << i + 1 << ": " << r.public_after[i].str() << "\n";
  if (r.error) {
    std::string msg = r.error->message;
    if (r.error->move_error) msg += " (" + r.error->move_error->explanation() + ")";
    if (r.error->kind == ReplayErrorKind::InvalidMove || r.error->kind == ReplayErrorKind::ScriptAtWrongTurn)
      throw ValidationFailure("move " + std::to_string(r.error->move_index + 1) + ": " + msg);
    std::cerr << "stopped at move " << r.error->move_index + 1 << ": " << msg << "\n";
  }
  return 0;
}

int cmd_explore(const Common& c, const std::string& file) {
  ResolvedModule m = load(file);
  SlsLts lts = explore(m, c.budget(), ExploreOptions{c.jobs});
  const Lts& g = lts.graph;
  std::size_t crashed = 0, diverged = 0, frontier = 0;
  for (const auto& n : g.nodes) {
    crashed += n.status == NodeStatus::Crashed;
    diverged += n.status == NodeStatus::Diverged;
    frontier += !n.expanded && n.status == NodeStatus::Live;
  }
  if (c.jsonl()) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      json trace = json::array();
      for (const LtsEdge* e : g.path_to(i))
        if (!e->tau) trace.push_back(label_to_json(e->label));
      const LtsNode& n = g.nodes[i];
      std::string status = n.status == NodeStatus::Live ? (n.expanded ? "live" : "frontier")
                           : n.status == NodeStatus::Crashed ? "crashed"
                                                              : "diverged";
      std::cout << json{{"node", i}, {"depth", n.depth}, {"status", status}, {"public", names_to_json(n.pub)},
                        {"trace", trace}}
                       .dump()
                << "\n";
    }
    return 0;
  }
  std::cout << "states " << lts.states.size() << ", edges " << g.edge_count() << ", depth " << c.depth << "\n";
  std::cout << "crashed " << crashed << ", diverged " << diverged << ", unexpanded " << frontier << "\n";
  return 0;
}

void write_witness(const std::string& path, const Witness& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& mv : w.side == Side::Left ? w.script_left : w.script_right) out << move_to_json(mv).dump() << "\n";
}

int cmd_bisim(const Common& c, const std::string& a, const std::string& b, const std::string& witness, bool weak) {
  ResolvedPair p = resolve_pair(parse_module(read_file(a)), parse_module(read_file(b)));
  Verdict v;
  if (weak) {
    MoveBudget bud = c.budget();
    v = weak_bisimilar(explore(p.first, bud, {c.jobs}).graph, explore(p.second, bud, {c.jobs}).graph);
  } else {
    v = bisimilar(p.first, p.second, c.budget(), {c.jobs});
  }
  if (c.jsonl()) {
    json j{{"verdict", verdict_name(v.kind)}, {"depth", v.depth}, {"pairs", v.pairs}, {"message", v.message}};
    if (v.witness) {
      json tl = json::array(), tr = json::array();
      for (const auto& l : v.witness->trace_left) tl.push_back(label_to_json(l));
      for (const auto& l : v.witness->trace_right) tr.push_back(label_to_json(l));
      j["witness"] = {{"left", tl},
                      {"right", tr},
                      {"side", v.witness->side == Side::Left ? "left" : "right"},
                      {"unmatched", v.witness->unmatched ? label_to_json(*v.witness->unmatched) : json(nullptr)}};
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << verdict_name(v.kind) << " at depth " << v.depth << " (" << v.pairs << " pairs)";
    if (!v.message.empty()) std::cout << ": " << v.message;
    std::cout << "\n";
    if (v.witness) {
      std::cout << "left:\n" << format_trace(v.witness->trace_left, TraceStyle::Text);
      std::cout << "right:\n" << format_trace(v.witness->trace_right, TraceStyle::Text);
      if (v.witness->unmatched)
        std::cout << "unmatched on the " << (v.witness->side == Side::Left ? "left" : "right") << ": "
                  << render(*v.witness->unmatched) << "\n";
    }
  }
  if (v.witness && !witness.empty()) write_witness(witness, *v.witness);
  switch (v.kind) {
    case Verdict::Kind::BisimilarUpTo: return 0;
    case Verdict::Kind::Distinguished: return 1;
    case Verdict::Kind::InterfaceMismatch: return 2;
  }
  return kInternal;
}

json report_json(const CompositionReport& r) {
  json items = json::array();
  for (int i = 0; i < 5; ++i)
    items.push_back({{"item", i + 1},
                     {"checked", r.items[i].checked},
                     {"failed", r.items[i].failed},
                     {"firstFailure", r.items[i].first_failure}});
  json j{{"holds", r.holds()},
         {"states", r.states},
         {"edges", r.edges},
         {"items", items},
         {"lemma", {{"states", r.lemma_states}, {"failures", r.lemma_failures}, {"first", r.first_lemma_failure}}}};
  if (r.bisim) j["bisim"] = {{"verdict", verdict_name(r.bisim->kind)}, {"message", r.bisim->message}};
  return j;
}

int cmd_compose(const Common& c, const std::string& a, const std::string& b, bool check,
                const std::vector<std::string>& faults) {
  SourceModule sa = parse_module(read_file(a)), sb = parse_module(read_file(b));
  ComposeFaults f;
  for (const auto& x : faults) {
    if (x == "freshness") f.drop_cross_call_freshness = true;
    if (x == "closure") f.skip_closure_in_p_update = true;
  }
  ComposedSources cs = compose_sources(sa, sb, f);
  if (!check) {
    CompositeLts lts = explore_composite(cs.composition, c.budget());
    if (c.jsonl()) {
      std::cout << json{{"states", lts.states.size()}, {"edges", lts.graph.edge_count()}}.dump() << "\n";
    } else {
      std::cout << print_module(syntactic_compose(sa, sb));
      std::cout << "composite: " << lts.states.size() << " states, " << lts.graph.edge_count() << " edges\n";
    }
    return 0;
  }
  CompositionReport r = check_composition(cs.composition, cs.syntactic, c.budget());
  if (c.jsonl()) {
    std::cout << report_json(r).dump() << "\n";
  } else {
    std::cout << "composite states " << r.states << ", edges " << r.edges << "\n";
    for (int i = 0; i < 5; ++i) {
      std::cout << "item " << i + 1 << ": " << (r.items[i].failed ? "FAIL" : "ok") << " (" << r.items[i].failed << "/"
                << r.items[i].checked << " failed)\n";
      if (!r.items[i].first_failure.empty()) std::cout << "  " << r.items[i].first_failure << "\n";
    }
    std::cout << "invariants: " << r.lemma_failures << "/" << r.lemma_states << " states failed\n";
    if (!r.first_lemma_failure.empty()) std::cout << "  " << r.first_lemma_failure << "\n";
    if (r.bisim) std::cout << "weak bisimulation with M1.M2: " << verdict_name(r.bisim->kind) << "\n";
    std::cout << (r.holds() ? "composition check passed" : "composition check FAILED") << "\n";
  }
  return r.holds() ? 0 : 1;
}

int cmd_attack_demo(const Common& c, const std::string& module_file, const std::string& script_file) {
  ResolvedModule m = resolve_and_desugar(parse_module(module_file.empty() ? bundled_prot_source() : read_file(module_file)));
  auto script = parse_script(script_file.empty() ? bundled_attack_script() : read_file(script_file));
  AttackDemo d = attack_demo(m, script, c.fuel);
  if (c.jsonl()) {
    for (std::size_t i = 0; i < d.steps.size(); ++i)
      std::cout << json{{"step", i + 1},
                        {"label", label_to_json(d.steps[i].label)},
                        {"note", d.steps[i].note},
                        {"disclosed", names_to_json(d.steps[i].disclosed)}}
                       .dump()
                << "\n";
    if (d.secret) std::cout << json{{"secret", d.secret->str()}}.dump() << "\n";
  } else {
    std::cout << format_demo(d, m);
  }
  if (!d.error.empty()) throw ValidationFailure(d.error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sysgame: system-level game semantics workbench"};
  app.require_subcommand(1);
  Common c;
  std::string file, file2, script, fn, arg = "[]", witness, host = "127.0.0.1";
  std::vector<std::string> faults;
  bool internal = false, check = false, weak = false;
  int port = 8080;

  auto* parse = app.add_subcommand("parse", "Parse and resolve a module");
  parse->add_option("module", file)->required()->check(CLI::ExistingFile);
  add_format(parse, c);

  auto* run = app.add_subcommand("run", "Call an exported function once");
  run->add_option("module", file)->required()->check(CLI::ExistingFile);
  run->add_option("--call", fn, "Function to call")->required();
  run->add_option("--arg", arg, "Argument as JSON");
  run->add_flag("--trace-internal", internal, "Print every machine configuration");
  run->add_option("--fuel", c.fuel);
  add_format(run, c);

  auto* trace = app.add_subcommand("trace", "Replay a System script");
  trace->add_option("module", file)->required()->check(CLI::ExistingFile);
  trace->add_option("--script", script, "Script in jsonl")->required()->check(CLI::ExistingFile);
  trace->add_option("--fuel", c.fuel);
  add_format(trace, c);

  auto* exp = app.add_subcommand("explore", "Explore the bounded LTS");
  exp->add_option("module", file)->required()->check(CLI::ExistingFile);
  add_budget(exp, c);
  add_format(exp, c);

  auto* bis = app.add_subcommand("bisim", "Bounded bisimilarity of two modules");
  bis->add_option("left", file)->required()->check(CLI::ExistingFile);
  bis->add_option("right", file2)->required()->check(CLI::ExistingFile);
  bis->add_option("--witness", witness, "Write the distinguishing script here");
  bis->add_flag("--weak", weak, "Absorb internal moves");
  add_budget(bis, c);
  add_format(bis, c);

  auto* comp = app.add_subcommand("compose", "Semantic composition of two modules");
  comp->add_option("left", file)->required()->check(CLI::ExistingFile);
  comp->add_option("right", file2)->required()->check(CLI::ExistingFile);
  comp->add_flag("--check", check, "Check the composite against the syntactic link");
  comp->add_option("--fault", faults, "Inject a fault")->check(CLI::IsMember({"freshness", "closure"}));
  add_budget(comp, c);
  add_format(comp, c);

  auto* demo = app.add_subcommand("attack-demo", "Replay the leak of prot's secret");
  demo->add_option("--module", file, "Module instead of the bundled prot")->check(CLI::ExistingFile);
  demo->add_option("--script", script, "Script instead of the bundled attack")->check(CLI::ExistingFile);
  demo->add_option("--fuel", c.fuel);
  add_format(demo, c);

  auto* srv = app.add_subcommand("serve", "Serve the session API over HTTP");
  srv->add_option("--host", host);
  srv->add_option("--port", port);
  add_budget(srv, c);
  add_format(srv, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*parse) return cmd_parse(c, file);
    if (*run) return cmd_run(c, file, fn, arg, internal);
    if (*trace) return cmd_trace(c, file, script);
    if (*exp) return cmd_explore(c, file);
    if (*bis) return cmd_bisim(c, file, file2, witness, weak);
    if (*comp) return cmd_compose(c, file, file2, check, faults);
    if (*demo) return cmd_attack_demo(c, file, script);
    if (*srv) {
      SessionManager manager(c.budget());
      std::cerr << "listening on " << host << ":" << port << "\n";
      serve(manager, host, port);
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kValidation;
  } catch (const ResolveError& e) {
    std::cerr << "resolve error: " << e.pos().line << ":" << e.pos().col << ": " << e.what() << "\n";
    return kValidation;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationFailure& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
