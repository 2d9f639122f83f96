#include <sstream>

#include "sysgame/syntax.hpp"

namespace sysgame {

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Eq: return "==";
    case BinOp::Lt: return "<";
    case BinOp::Assign: return "=";
    case BinOp::Seq: return ";";
  }
  return "?";
}

namespace ex {
namespace {
std::shared_ptr<ExpNode> node(ExpNode::Kind kind) {
  auto n = std::make_shared<ExpNode>();
  n->kind = kind;
  return n;
}
}  // namespace

Exp val(Value v) {
  auto n = node(ExpNode::Kind::Val);
  n->val = std::move(v);
  return n;
}
Exp integer(std::int64_t i) { return val(Value::integer(i)); }
Exp name(const Name& a) { return val(Value::name(a)); }
Exp unit() { return val(Value::unit()); }
Exp ident(std::string id, int line, int col) {
  auto n = node(ExpNode::Kind::Ident);
  n->ident = std::move(id);
  n->line = line;
  n->col = col;
  return n;
}
Exp var(std::string id, int v) {
  auto n = node(ExpNode::Kind::Var);
  n->ident = std::move(id);
  n->var = v;
  return n;
}
Exp deref(Exp e) {
  auto n = node(ExpNode::Kind::Deref);
  n->kids = {std::move(e)};
  return n;
}
Exp bin(BinOp op, Exp a, Exp b) {
  auto n = node(ExpNode::Kind::Bin);
  n->op = op;
  n->kids = {std::move(a), std::move(b)};
  return n;
}
Exp seq(Exp a, Exp b) { return bin(BinOp::Seq, std::move(a), std::move(b)); }
Exp assign(Exp a, Exp b) { return bin(BinOp::Assign, std::move(a), std::move(b)); }
Exp cond(Exp c, Exp a, Exp b) {
  auto n = node(ExpNode::Kind::If);
  n->kids = {std::move(c), std::move(a), std::move(b)};
  return n;
}
Exp call(Exp f, Exp arg) {
  auto n = node(ExpNode::Kind::Call);
  n->kids = {std::move(f), std::move(arg)};
  return n;
}
Exp tuple(Exp a, Exp b) {
  auto n = node(ExpNode::Kind::Tuple);
  n->kids = {std::move(a), std::move(b)};
  return n;
}
Exp new_loc() { return node(ExpNode::Kind::New); }
Exp local(std::string id, int v) {
  auto n = node(ExpNode::Kind::Local);
  n->ident = std::move(id);
  n->var = v;
  return n;
}
}  // namespace ex

bool is_value(const Exp& e) { return e->kind == ExpNode::Kind::Val; }

bool exp_equal(const Exp& a, const Exp& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case ExpNode::Kind::Val:
      if (a->val != b->val) return false;
      break;
    case ExpNode::Kind::Ident:
      if (a->ident != b->ident) return false;
      break;
    case ExpNode::Kind::Var:
    case ExpNode::Kind::Local:
      if (a->var != b->var) return false;
      break;
    case ExpNode::Kind::Bin:
      if (a->op != b->op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!exp_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

void render_to(std::ostream& os, const Exp& e);

void render_operand(std::ostream& os, const Exp& e) {
  bool wrap = e->kind == ExpNode::Kind::Bin || e->kind == ExpNode::Kind::If;
  if (wrap) os << "(";
  render_to(os, e);
  if (wrap) os << ")";
}

void render_to(std::ostream& os, const Exp& e) {
  switch (e->kind) {
    case ExpNode::Kind::Val: os << e->val.str(); break;
    case ExpNode::Kind::Ident:
    case ExpNode::Kind::Var: os << e->ident; break;
    case ExpNode::Kind::Deref:
      os << "*";
      render_operand(os, e->kids[0]);
      break;
    case ExpNode::Kind::Bin:
      if (e->op == BinOp::Seq) {
        render_to(os, e->kids[0]);
        os << "; ";
        render_to(os, e->kids[1]);
      } else {
        render_operand(os, e->kids[0]);
        os << " " << binop_symbol(e->op) << " ";
        render_operand(os, e->kids[1]);
      }
      break;
    case ExpNode::Kind::If:
      os << "if (";
      render_to(os, e->kids[0]);
      os << ") then {";
      render_to(os, e->kids[1]);
      os << "} else {";
      render_to(os, e->kids[2]);
      os << "}";
      break;
    case ExpNode::Kind::Call: {
      render_operand(os, e->kids[0]);
      const auto& arg = e->kids[1];
      bool parenthesized = arg->kind == ExpNode::Kind::Tuple ||
                           (arg->kind == ExpNode::Kind::Val && arg->val.kind() == Value::Kind::Tuple);
      if (parenthesized) {
        render_to(os, arg);
      } else {
        os << "(";
        render_to(os, arg);
        os << ")";
      }
      break;
    }
    case ExpNode::Kind::Tuple:
      os << "(";
      render_to(os, e->kids[0]);
      os << ", ";
      render_to(os, e->kids[1]);
      os << ")";
      break;
    case ExpNode::Kind::New: os << "new()"; break;
    case ExpNode::Kind::Local: os << "local " << e->ident; break;
  }
}

}  // namespace

std::string render(const Exp& e) {
  std::ostringstream os;
  render_to(os, e);
  return os.str();
}

void visit_names(const Exp& e, const std::function<void(const Name&)>& visit) {
  if (e->kind == ExpNode::Kind::Val) {
    for (const auto& a : e->val.atoms())
      if (a.is_name()) visit(a.as_name());
    return;
  }
  for (const auto& k : e->kids) visit_names(k, visit);
}

NameSet support(const Exp& e) {
  std::vector<Name> out;
  visit_names(e, [&](const Name& n) { out.push_back(n); });
  return NameSet(std::move(out));
}

namespace {

template <typename F>
Exp map_leaves(const Exp& e, const F& leaf) {
  if (!e) return e;
  if (e->kids.empty()) return leaf(e);
  std::vector<Exp> kids;
  kids.reserve(e->kids.size());
  bool changed = false;
  for (const auto& k : e->kids) {
    kids.push_back(map_leaves(k, leaf));
    changed |= kids.back() != k;
  }
  if (!changed) return e;
  auto copy = std::make_shared<ExpNode>(*e);
  copy->kids = std::move(kids);
  return copy;
}

}  // namespace

Exp apply_perm(const Permutation& pi, const Exp& e) {
  if (pi.is_identity()) return e;
  return map_leaves(e, [&](const Exp& leaf) -> Exp {
    if (leaf->kind != ExpNode::Kind::Val) return leaf;
    Value mapped = apply_perm(pi, leaf->val);
    if (mapped == leaf->val) return leaf;
    return ex::val(std::move(mapped));
  });
}

Exp substitute(const Exp& e, int var, const Value& v) {
  return map_leaves(e, [&](const Exp& leaf) -> Exp {
    if (leaf->kind == ExpNode::Kind::Var && leaf->var == var) return ex::val(v);
    return leaf;
  });
}

bool frame_equal(const Frame& a, const Frame& b) {
  if (a.kind != b.kind || a.op != b.op || a.v != b.v) return false;
  auto eq = [](const Exp& x, const Exp& y) { return (!x && !y) || (x && y && exp_equal(x, y)); };
  return eq(a.e1, b.e1) && eq(a.e2, b.e2);
}

bool frames_equal(const FrameStack& a, const FrameStack& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!frame_equal(a[i], b[i])) return false;
  return true;
}

std::string render(const Frame& f) {
  const std::string hole = "□";
  switch (f.kind) {
    case Frame::Kind::If:
      return "if (" + hole + ") then {" + render(f.e1) + "} else {" + render(f.e2) + "}";
    case Frame::Kind::BinL:
      if (f.op == BinOp::Seq) return hole + "; " + render(f.e1);
      return hole + " " + binop_symbol(f.op) + " " + render(f.e1);
    case Frame::Kind::BinR:
      if (f.op == BinOp::Seq) return f.v.str() + "; " + hole;
      return f.v.str() + " " + binop_symbol(f.op) + " " + hole;
    case Frame::Kind::Deref: return "*" + hole;
    case Frame::Kind::AppL: return hole + "(" + render(f.e1) + ")";
    case Frame::Kind::AppR: return f.v.str() + "(" + hole + ")";
    case Frame::Kind::TupL: return "(" + hole + ", " + render(f.e1) + ")";
    case Frame::Kind::TupR: return "(" + f.v.str() + ", " + hole + ")";
  }
  return "?";
}

std::string render(const FrameStack& t) {
  if (t.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += "∘";
    out += "(" + render(t[i]) + ")";
  }
  return out;
}

void visit_names(const FrameStack& t, const std::function<void(const Name&)>& visit) {
  // Innermost frame first: that is the order evaluation will reach them.
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    for (const auto& a : it->v.atoms())
      if (a.is_name()) visit(a.as_name());
    if (it->e1) visit_names(it->e1, visit);
    if (it->e2) visit_names(it->e2, visit);
  }
}

NameSet support(const FrameStack& t) {
  std::vector<Name> out;
  visit_names(t, [&](const Name& n) { out.push_back(n); });
  return NameSet(std::move(out));
}

FrameStack apply_perm(const Permutation& pi, const FrameStack& t) {
  if (pi.is_identity()) return t;
  FrameStack out;
  out.reserve(t.size());
  for (const auto& f : t) {
    Frame g = f;
    g.v = apply_perm(pi, f.v);
    if (f.e1) g.e1 = apply_perm(pi, f.e1);
    if (f.e2) g.e2 = apply_perm(pi, f.e2);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace sysgame
