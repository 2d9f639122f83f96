#include "sysgame/demo.hpp"

#include <sstream>

#include "sysgame/bundled.hpp"
#include "sysgame/io.hpp"

namespace sysgame {

const std::string& bundled_prot_source() {
  static const std::string s = bundled::prot_source;
  return s;
}

const std::string& bundled_attack_script() {
  static const std::string s = bundled::attack_script;
  return s;
}

namespace {

std::string fn_name(const ResolvedModule& m, const Name& f) {
  auto it = m.ident_of.find(f);
  return it == m.ident_of.end() ? f.str() : it->second;
}

std::string note_for(const ResolvedModule& m, const Label& l, const NameSet& disclosed, const NameSet& pub_before,
                     const NameSet& sys_ret_conts) {
  std::ostringstream os;
  bool sys = l.dir == Direction::SP;
  os << (sys ? "system " : "program ");
  if (l.kind == MoveKind::Call) {
    os << "calls " << fn_name(m, l.fn) << " with " << (sys ? "continuation " : "fresh continuation ") << l.k.str();
  } else if (sys) {
    if (sys_ret_conts.contains(l.k)) os << "reuses " << l.k.str() << " to return " << l.value.str();
    else os << "returns " << l.value.str() << " via " << l.k.str();
    NameSet fresh = support(l.value) - pub_before;
    if (!fresh.empty()) os << ", a fresh name";
    else if (!support(l.value).empty()) os << ", a name learned earlier";
  } else {
    os << "returns " << l.value.str() << " to " << l.k.str();
  }
  NameSet shown = disclosed.locations();
  if (!shown.empty() && !sys) os << "; disclosed " << shown.str();
  return os.str();
}

}  // namespace

AttackDemo attack_demo(const ResolvedModule& m, const std::vector<SystemMove>& script, std::size_t fuel) {
  AttackDemo out;
  ReplayResult r = replay(m, script, fuel);
  if (r.error) out.error = r.error->message;
  NameSet pub = public_names(SlsState(initial_config(m)));
  NameSet ever = pub;
  NameSet sys_rets;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    DemoStep s;
    s.label = r.trace[i];
    s.pub_after = r.public_after[i];
    s.disclosed = s.pub_after - pub;
    s.note = note_for(m, s.label, s.disclosed, pub, sys_rets);
    if (s.label.dir == Direction::SP && s.label.kind == MoveKind::Ret) sys_rets.insert(s.label.k);
    pub = s.pub_after;
    out.steps.push_back(std::move(s));
  }
  if (!out.steps.empty()) {
    const DemoStep& last = out.steps.back();
    NameSet v = support(last.label.value);
    if (last.label.dir == Direction::PS && v.size() == 1 && last.disclosed.contains(*v.begin())) {
      out.secret = *v.begin();
      for (std::size_t i = 0; i + 1 < out.steps.size(); ++i)
        if (out.steps[i].pub_after.contains(*out.secret)) out.secret.reset();
    }
  }
  return out;
}

AttackDemo attack_demo() {
  ResolvedModule m = resolve_and_desugar(parse_module(bundled_prot_source()));
  return attack_demo(m, parse_script(bundled_attack_script()), MoveBudget{}.fuel);
}

std::string format_demo(const AttackDemo& d, const ResolvedModule& m) {
  (void)m;
  std::ostringstream os;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    std::string line = render(d.steps[i].label);
    std::string store;
    if (auto bar = line.find(" | "); bar != std::string::npos) {
      store = line.substr(bar + 3);
      line = line.substr(0, bar);
    }
    os << i + 1 << ". " << line << "\n";
    os << "     store " << store << "\n";
    os << "     " << d.steps[i].note << "\n";
  }
  if (!d.error.empty()) os << "replay stopped: " << d.error << "\n";
  if (d.secret) os << "secret " << d.secret->str() << " disclosed at step " << d.steps.size() << "\n";
  return os.str();
}

}  // namespace sysgame
