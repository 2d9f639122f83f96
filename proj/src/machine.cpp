#include "sysgame/machine.hpp"

#include <sstream>

namespace sysgame {

const char* crash_reason_name(CrashReason r) {
  switch (r) {
    case CrashReason::DerefUnbound: return "DerefUnbound";
    case CrashReason::NotALocation: return "NotALocation";
    case CrashReason::BadOperands: return "BadOperands";
    case CrashReason::CallNonFunction: return "CallNonFunction";
    case CrashReason::ArityMismatch: return "ArityMismatch";
  }
  return "?";
}

bool config_equal(const ProgramConfig& a, const ProgramConfig& b) {
  return a.used == b.used && a.pub == b.pub && a.store == b.store && frames_equal(a.frames, b.frames) &&
         exp_equal(a.control, b.control) && a.ret_cont == b.ret_cont;
}

NameSet support(const ProgramConfig& c) {
  NameSet out = c.used | c.pub | support(c.store) | support(c.frames) | support(c.control);
  out.insert(c.ret_cont);
  return out;
}

ProgramConfig apply_perm(const Permutation& pi, const ProgramConfig& c) {
  return {apply_perm(pi, c.used),   apply_perm(pi, c.pub),     apply_perm(pi, c.store),
          apply_perm(pi, c.frames), apply_perm(pi, c.control), pi(c.ret_cont)};
}

std::string render(const ProgramConfig& c) {
  std::ostringstream os;
  os << "<" << c.used.str() << " | " << c.pub.str() << " |- {" << render(c.store) << "}, " << render(c.frames)
     << ", " << render(c.control) << ", " << c.ret_cont.str() << ">";
  return os.str();
}

namespace {

StepResult crash(CrashReason reason, std::string detail) {
  StepResult r;
  r.kind = StepResult::Kind::Crash;
  r.reason = reason;
  r.detail = std::move(detail);
  return r;
}

StepResult internal(ProgramConfig c) {
  StepResult r;
  r.kind = StepResult::Kind::Internal;
  r.next = std::move(c);
  return r;
}

Name fresh_location(const ProgramConfig& c, const NameSet* avoid) {
  if (!avoid) return fresh(Sort::Location, c.used);
  return fresh(Sort::Location, c.used | avoid->locations());
}

StepResult apply_operator(ProgramConfig c, BinOp op, const Value& a, const Value& b) {
  if (op == BinOp::Eq) {
    c.control = ex::integer(a == b ? 1 : 0);
    return internal(std::move(c));
  }
  if (!a.is_int() || !b.is_int())
    return crash(CrashReason::BadOperands,
                 a.str() + " " + binop_symbol(op) + " " + b.str() + " needs integer operands");
  auto x = static_cast<std::uint64_t>(a.as_int());
  auto y = static_cast<std::uint64_t>(b.as_int());
  std::int64_t out = 0;
  switch (op) {
    case BinOp::Add: out = static_cast<std::int64_t>(x + y); break;
    case BinOp::Sub: out = static_cast<std::int64_t>(x - y); break;
    case BinOp::Lt: out = a.as_int() < b.as_int() ? 1 : 0; break;
    default: break;
  }
  c.control = ex::integer(out);
  return internal(std::move(c));
}

StepResult plug_value(ProgramConfig c, const ResolvedModule& m) {
  const Value v = c.control->val;
  if (c.frames.empty()) {
    StepResult r;
    r.kind = StepResult::Kind::SystemReturn;
    r.value = v;
    r.k = c.ret_cont;
    return r;
  }
  Frame top = c.frames.back();
  c.frames.pop_back();
  switch (top.kind) {
    case Frame::Kind::If:
      if (!v.is_int()) return crash(CrashReason::BadOperands, "condition " + v.str() + " is not an integer");
      c.control = v.as_int() != 0 ? top.e1 : top.e2;
      return internal(std::move(c));
    case Frame::Kind::BinL:
      c.frames.push_back(Frame::bin_right(v, top.op));
      c.control = top.e1;
      return internal(std::move(c));
    case Frame::Kind::BinR:
      if (top.op == BinOp::Seq) return internal(std::move(c));
      if (top.op == BinOp::Assign) {
        if (!top.v.is_name() || !top.v.as_name().is_location())
          return crash(CrashReason::NotALocation, "assignment target " + top.v.str() + " is not a location");
        const Name& a = top.v.as_name();
        if (!c.store.contains(a)) return crash(CrashReason::DerefUnbound, "location " + a.str() + " is unbound");
        if (!is_storable(v)) return crash(CrashReason::BadOperands, "value " + v.str() + " cannot be stored");
        c.store.set(a, v);
        c.control = ex::unit();
        return internal(std::move(c));
      }
      return apply_operator(std::move(c), top.op, top.v, v);
    case Frame::Kind::Deref: {
      if (!v.is_name() || !v.as_name().is_location())
        return crash(CrashReason::NotALocation, "dereferenced value " + v.str() + " is not a location");
      auto w = c.store.get(v.as_name());
      if (!w) return crash(CrashReason::DerefUnbound, "location " + v.str() + " is unbound");
      c.control = ex::val(*w);
      return internal(std::move(c));
    }
    case Frame::Kind::AppL:
      c.frames.push_back(Frame::app_right(v));
      c.control = top.e1;
      return internal(std::move(c));
    case Frame::Kind::AppR: {
      if (!top.v.is_name() || !top.v.as_name().is_function())
        return crash(CrashReason::CallNonFunction, "called value " + top.v.str() + " is not a function");
      const Name f = top.v.as_name();
      const FunctionDef* def = lookup_def(f, m);
      if (!def) {
        StepResult r;
        r.kind = StepResult::Kind::SystemCall;
        r.fn = f;
        r.value = v;
        r.frames = std::move(c.frames);
        r.k = c.ret_cont;
        return r;
      }
      Exp body = def->body;
      if (def->params.size() == 1) {
        body = substitute(body, def->params[0], v);
      } else if (def->params.size() > 1) {
        if (v.width() != def->params.size())
          return crash(CrashReason::ArityMismatch, m.label(f) + " expects " + std::to_string(def->params.size()) +
                                                       " arguments, got " + v.str());
        auto atoms = v.atoms();
        for (std::size_t i = 0; i < atoms.size(); ++i) body = substitute(body, def->params[i], atoms[i]);
      }
      c.control = body;
      return internal(std::move(c));
    }
    case Frame::Kind::TupL:
      c.frames.push_back(Frame::tup_right(v));
      c.control = top.e1;
      return internal(std::move(c));
    case Frame::Kind::TupR:
      c.control = ex::val(Value::pair(top.v, v));
      return internal(std::move(c));
  }
  return crash(CrashReason::BadOperands, "unknown frame");
}

}  // namespace

StepResult step(const ProgramConfig& in, const ResolvedModule& m, const NameSet* avoid) {
  const Exp& e = in.control;
  if (e->kind == ExpNode::Kind::Val) return plug_value(in, m);
  ProgramConfig c = in;
  switch (e->kind) {
    case ExpNode::Kind::If:
      c.frames.push_back(Frame::cond(e->kids[1], e->kids[2]));
      c.control = e->kids[0];
      break;
    case ExpNode::Kind::Bin:
      c.frames.push_back(Frame::bin_left(e->op, e->kids[1]));
      c.control = e->kids[0];
      break;
    case ExpNode::Kind::Deref:
      c.frames.push_back(Frame::deref());
      c.control = e->kids[0];
      break;
    case ExpNode::Kind::Call:
      c.frames.push_back(Frame::app_left(e->kids[1]));
      c.control = e->kids[0];
      break;
    case ExpNode::Kind::Tuple:
      c.frames.push_back(Frame::tup_left(e->kids[1]));
      c.control = e->kids[0];
      break;
    case ExpNode::Kind::New: {
      Name a = fresh_location(c, avoid);
      c.used.insert(a);
      c.store.set(a, Value::integer(0));
      c.control = ex::name(a);
      break;
    }
    case ExpNode::Kind::Local: {
      if (c.frames.empty() || c.frames.back().kind != Frame::Kind::BinL || c.frames.back().op != BinOp::Seq)
        return crash(CrashReason::BadOperands, "local " + e->ident + " outside a sequence");
      Exp rest = c.frames.back().e1;
      c.frames.pop_back();
      Name a = fresh_location(c, avoid);
      c.used.insert(a);
      c.store.set(a, Value::integer(0));
      c.control = substitute(rest, e->var, Value::name(a));
      break;
    }
    case ExpNode::Kind::Ident:
    case ExpNode::Kind::Var:
      throw std::logic_error("open expression reached the machine: " + e->ident);
    case ExpNode::Kind::Val: break;
  }
  return internal(std::move(c));
}

RunResult run_to_boundary(const ProgramConfig& c, const ResolvedModule& m, std::size_t fuel, const NameSet* avoid,
                          const StepObserver& observe) {
  RunResult out;
  out.last = c;
  if (observe) observe(out.last);
  while (true) {
    StepResult r = step(out.last, m, avoid);
    if (r.kind != StepResult::Kind::Internal) {
      out.result = std::move(r);
      return out;
    }
    if (out.steps >= fuel) {
      out.result.kind = StepResult::Kind::Divergent;
      out.result.detail = "fuel " + std::to_string(fuel) + " exhausted";
      return out;
    }
    out.last = std::move(r.next);
    ++out.steps;
    if (observe) observe(out.last);
  }
}

}  // namespace sysgame
