#include <cctype>
#include <set>
#include <sstream>

#include "sysgame/syntax.hpp"

namespace sysgame {

namespace {

enum class Tok { Ident, Int, Punct, Keyword, End };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t number = 0;
  SourcePos pos;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"export", "import", "decl", "local", "return",
                                           "if",     "then",   "else", "new"};
  return kw;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word = text.substr(i, j - i);
      out.push_back({keywords().count(word) ? Tok::Keyword : Tok::Ident, word, 0, pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      std::string digits = text.substr(i, j - i);
      std::int64_t value = 0;
      try {
        value = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw SyntaxError("integer literal out of range", pos);
      }
      out.push_back({Tok::Int, digits, value, pos});
      advance(j - i);
      continue;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Tok::Punct, "==", 0, pos});
      advance(2);
      continue;
    }
    if (std::string("(){},;=<+-*").find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c), 0, pos});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({Tok::End, "", 0, {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceModule module() {
    SourceModule m;
    bool seen_export = false, seen_import = false;
    while (true) {
      if (is_kw("export")) {
        if (seen_export) fail("duplicate export clause");
        seen_export = true;
        next();
        m.exports = id_list_until_semicolon();
      } else if (is_kw("import")) {
        if (seen_import) fail("duplicate import clause");
        seen_import = true;
        next();
        m.imports = id_list_until_semicolon();
      } else {
        break;
      }
    }
    std::set<std::string> declared;
    while (is_kw("decl")) {
      next();
      Token id = expect_ident();
      if (!declared.insert(id.text).second)
        throw SyntaxError("duplicate declaration of '" + id.text + "'", id.pos);
      if (is_punct("(")) {
        m.order.emplace_back(true, m.funcs.size());
        m.funcs.push_back(function(id));
        accept_punct(";");
      } else {
        VarDecl v{id.text, 0, id.pos};
        if (accept_punct("=")) {
          bool negative = accept_punct("-");
          if (peek().kind != Tok::Int) fail("expected integer initializer");
          v.init = negative ? -next().number : next().number;
        }
        expect_punct(";");
        m.order.emplace_back(false, m.vars.size());
        m.vars.push_back(v);
      }
    }
    if (peek().kind != Tok::End) fail("expected 'decl' or end of module");
    std::set<std::string> header;
    for (const auto& e : m.exports) {
      if (!header.insert(e).second) fail("identifier '" + e + "' listed twice in header");
      if (!declared.count(e)) fail("export of undeclared identifier '" + e + "'");
    }
    for (const auto& i : m.imports) {
      if (!header.insert(i).second) fail("identifier '" + i + "' listed twice in header");
      if (declared.count(i)) fail("imported identifier '" + i + "' is also declared");
    }
    return m;
  }

 private:
  FuncDecl function(const Token& id) {
    FuncDecl f;
    f.id = id.text;
    f.pos = id.pos;
    expect_punct("(");
    std::set<std::string> bound;
    if (!is_punct(")")) {
      do {
        Token p = expect_ident();
        if (!bound.insert(p.text).second)
          throw SyntaxError("duplicate parameter '" + p.text + "'", p.pos);
        f.params.push_back(p.text);
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("{");
    while (is_kw("local")) {
      next();
      for (const auto& l : id_list_until_semicolon()) {
        if (!bound.insert(l).second) fail("duplicate local '" + l + "'");
        f.locals.push_back(l);
      }
    }
    f.body = items("}");
    expect_punct("}");
    return f;
  }

  // item (';' item)* [';'] up to the closing token, folded into a sequence.
  Exp items(const std::string& close) {
    std::vector<Exp> parts;
    while (!is_punct(close)) {
      if (is_kw("return")) next();
      Exp e = expression();
      parts.push_back(e);
      if (is_punct(close)) break;
      bool block_ended = toks_[pos_ - 1].kind == Tok::Punct && toks_[pos_ - 1].text == "}";
      if (!accept_punct(";") && !block_ended) fail("expected ';'");
    }
    if (parts.empty()) return ex::unit();
    Exp acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = ex::seq(*it, acc);
    return acc;
  }

  Exp expression() {
    Exp lhs = equality();
    if (is_punct("=")) {
      next();
      return ex::assign(lhs, expression());
    }
    return lhs;
  }

  Exp equality() {
    Exp e = relational();
    while (accept_punct("==")) e = ex::bin(BinOp::Eq, e, relational());
    return e;
  }

  Exp relational() {
    Exp e = additive();
    while (accept_punct("<")) e = ex::bin(BinOp::Lt, e, additive());
    return e;
  }

  Exp additive() {
    Exp e = unary();
    while (true) {
      if (accept_punct("+")) e = ex::bin(BinOp::Add, e, unary());
      else if (accept_punct("-")) e = ex::bin(BinOp::Sub, e, unary());
      else return e;
    }
  }

  Exp unary() {
    if (accept_punct("*")) return ex::deref(unary());
    return postfix();
  }

  Exp postfix() {
    Exp e = primary();
    while (accept_punct("(")) {
      std::vector<Exp> args;
      if (!is_punct(")")) {
        do args.push_back(expression());
        while (accept_punct(","));
      }
      expect_punct(")");
      e = ex::call(e, fold_tuple(args));
    }
    return e;
  }

  static Exp fold_tuple(const std::vector<Exp>& parts) {
    if (parts.empty()) return ex::unit();
    Exp acc = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = ex::tuple(*it, acc);
    return acc;
  }

  Exp primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return ex::integer(next().number);
    if (t.kind == Tok::Ident) {
      Token id = next();
      return ex::ident(id.text, id.pos.line, id.pos.col);
    }
    if (is_kw("new")) {
      next();
      expect_punct("(");
      expect_punct(")");
      return ex::new_loc();
    }
    if (is_kw("if")) {
      next();
      expect_punct("(");
      Exp c = expression();
      expect_punct(")");
      expect_kw("then");
      Exp a = branch();
      expect_kw("else");
      Exp b = branch();
      return ex::cond(c, a, b);
    }
    if (accept_punct("(")) {
      if (accept_punct(")")) return ex::unit();
      std::vector<Exp> parts;
      do parts.push_back(expression());
      while (accept_punct(","));
      expect_punct(")");
      return fold_tuple(parts);
    }
    fail("expected expression");
  }

  Exp branch() {
    if (accept_punct("{")) {
      Exp e = items("}");
      expect_punct("}");
      return e;
    }
    return equality();
  }

  std::vector<std::string> id_list_until_semicolon() {
    std::vector<std::string> ids;
    if (!is_punct(";")) {
      do ids.push_back(expect_ident().text);
      while (accept_punct(","));
    }
    expect_punct(";");
    return ids;
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_kw(const char* kw) const { return peek().kind == Tok::Keyword && peek().text == kw; }
  bool is_punct(const std::string& p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool accept_punct(const std::string& p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(std::string("expected '") + kw + "'");
    next();
  }
  Token expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + found, t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print_items(std::ostream& os, const Exp& body) {
  Exp e = body;
  while (e->kind == ExpNode::Kind::Bin && e->op == BinOp::Seq) {
    os << "  " << render(e->kids[0]) << ";\n";
    e = e->kids[1];
  }
  os << "  return " << render(e) << ";\n";
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
  return out;
}

}  // namespace

SourceModule parse_module(const std::string& text) { return Parser(lex(text)).module(); }

std::string print_module(const SourceModule& m) {
  std::ostringstream os;
  os << "export " << join(m.exports) << ";\n";
  os << "import " << join(m.imports) << ";\n";
  for (const auto& [is_func, idx] : m.order) {
    if (!is_func) {
      os << "decl " << m.vars[idx].id << " = " << m.vars[idx].init << ";\n";
      continue;
    }
    const auto& f = m.funcs[idx];
    os << "decl " << f.id << "(" << join(f.params) << ") {\n";
    if (!f.locals.empty()) os << "  local " << join(f.locals) << ";\n";
    print_items(os, f.body);
    os << "}\n";
  }
  return os.str();
}

bool SourceModule::declares(const std::string& id) const {
  for (const auto& v : vars)
    if (v.id == id) return true;
  return declares_function(id);
}

bool SourceModule::declares_function(const std::string& id) const {
  for (const auto& f : funcs)
    if (f.id == id) return true;
  return false;
}

std::vector<std::string> SourceModule::declared() const {
  std::vector<std::string> out;
  for (const auto& [is_func, idx] : order) out.push_back(is_func ? funcs[idx].id : vars[idx].id);
  return out;
}

}  // namespace sysgame
