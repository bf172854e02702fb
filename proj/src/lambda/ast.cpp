// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/lambda/ast.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace bsw::lam {

// --------------------------------------------------------------------------
// Construction
// --------------------------------------------------------------------------

TypePtr t_nat() {
  static TypePtr t = std::make_shared<Type>(Type{Type::Kind::Nat, "", nullptr, nullptr, nullptr});
  return t;
}
TypePtr t_even() {
  static TypePtr t = std::make_shared<Type>(Type{Type::Kind::Even, "", nullptr, nullptr, nullptr});
  return t;
}
TypePtr t_odd() {
  static TypePtr t = std::make_shared<Type>(Type{Type::Kind::Odd, "", nullptr, nullptr, nullptr});
  return t;
}
TypePtr t_arrow(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type{Type::Kind::Arrow, "", std::move(dom), std::move(cod), nullptr});
}
TypePtr t_var(std::string name) {
  return std::make_shared<Type>(Type{Type::Kind::Var, std::move(name), nullptr, nullptr, nullptr});
}
TypePtr t_mu(std::string name, TypePtr body) {
  return std::make_shared<Type>(
      Type{Type::Kind::Mu, std::move(name), nullptr, nullptr, std::move(body)});
}
TypePtr t_and(TypePtr l, TypePtr r) {
  return std::make_shared<Type>(Type{Type::Kind::And, "", std::move(l), std::move(r), nullptr});
}
TypePtr t_or(TypePtr l, TypePtr r) {
  return std::make_shared<Type>(Type{Type::Kind::Or, "", std::move(l), std::move(r), nullptr});
}

ExprPtr e_var(std::string name) {
  Expr e{Expr::Kind::Var, std::move(name), 0, std::nullopt, nullptr, nullptr, nullptr};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_const(long n) {
  Expr e{Expr::Kind::Const, "", n, std::nullopt, nullptr, nullptr, nullptr};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_abs(std::string name, ExprPtr body, std::optional<TypePtr> anno) {
  Expr e{Expr::Kind::Abs, std::move(name), 0, std::move(anno), nullptr, nullptr, std::move(body)};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_app(ExprPtr f, ExprPtr a) {
  Expr e{Expr::Kind::App, "", 0, std::nullopt, std::move(f), std::move(a), nullptr};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_succ(ExprPtr b) {
  Expr e{Expr::Kind::Succ, "", 0, std::nullopt, nullptr, nullptr, std::move(b)};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_choice(ExprPtr l, ExprPtr r) {
  Expr e{Expr::Kind::Choice, "", 0, std::nullopt, std::move(l), std::move(r), nullptr};
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_plus(ExprPtr l, ExprPtr r) {
  Expr e{Expr::Kind::Plus, "", 0, std::nullopt, std::move(l), std::move(r), nullptr};
  return std::make_shared<Expr>(std::move(e));
}

bool is_value(const Expr& e) {
  return e.kind == Expr::Kind::Const || e.kind == Expr::Kind::Abs;
}

// --------------------------------------------------------------------------
// Printing (minimal parentheses; the printer round-trips the parser)
// --------------------------------------------------------------------------

namespace {

// type levels: 0 or / rec, 1 and, 2 arrow (right-assoc), 3 atom
void print_type_at(const TypePtr& t, int level, std::ostream& os) {
  auto paren = [&](int mine, auto&& body) {
    if (level > mine) os << '(';
    body();
    if (level > mine) os << ')';
  };
  switch (t->kind) {
    case Type::Kind::Nat: os << "nat"; break;
    case Type::Kind::Even: os << "even"; break;
    case Type::Kind::Odd: os << "odd"; break;
    case Type::Kind::Var: os << t->name; break;
    case Type::Kind::Mu:
      paren(0, [&] {
        os << "rec " << t->name << " . ";
        print_type_at(t->body, 0, os);
      });
      break;
    case Type::Kind::Or:
      paren(0, [&] {
        print_type_at(t->left, 0, os);
        os << " | ";
        print_type_at(t->right, 1, os);
      });
      break;
    case Type::Kind::And:
      paren(1, [&] {
        print_type_at(t->left, 1, os);
        os << " & ";
        print_type_at(t->right, 2, os);
      });
      break;
    case Type::Kind::Arrow:
      paren(2, [&] {
        print_type_at(t->left, 3, os);
        os << " -> ";
        print_type_at(t->right, 2, os);
      });
      break;
  }
}

// expr levels: 0 fun, 1 choice, 2 app, 3 prefix (succ/plus), 4 atom
void print_expr_at(const ExprPtr& e, int level, std::ostream& os) {
  auto paren = [&](int mine, auto&& body) {
    if (level > mine) os << '(';
    body();
    if (level > mine) os << ')';
  };
  switch (e->kind) {
    case Expr::Kind::Var: os << e->name; break;
    case Expr::Kind::Const: os << e->value; break;
    case Expr::Kind::Abs:
      paren(0, [&] {
        os << "fun " << e->name;
        if (e->anno) {
          os << " : ";
          print_type_at(*e->anno, 0, os);
        }
        os << " . ";
        print_expr_at(e->body, 0, os);
      });
      break;
    case Expr::Kind::Choice:
      paren(1, [&] {
        print_expr_at(e->left, 1, os);
        os << " (+) ";
        print_expr_at(e->right, 2, os);
      });
      break;
    case Expr::Kind::App:
      paren(2, [&] {
        print_expr_at(e->left, 2, os);
        os << ' ';
        print_expr_at(e->right, 3, os);
      });
      break;
    case Expr::Kind::Succ:
      paren(3, [&] {
        os << "succ ";
        print_expr_at(e->body, 3, os);
      });
      break;
    case Expr::Kind::Plus:
      paren(3, [&] {
        os << "+ ";
        print_expr_at(e->left, 4, os);
        os << ' ';
        print_expr_at(e->right, 4, os);
      });
      break;
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream os;
  print_type_at(t, 0, os);
  return os.str();
}

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_expr_at(e, 0, os);
  return os.str();
}

bool type_syntactic_eq(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Nat:
    case Type::Kind::Even:
    case Type::Kind::Odd: return true;
    case Type::Kind::Var: return a->name == b->name;
    case Type::Kind::Mu: return a->name == b->name && type_syntactic_eq(a->body, b->body);
    case Type::Kind::Arrow:
    case Type::Kind::And:
    case Type::Kind::Or:
      return type_syntactic_eq(a->left, b->left) && type_syntactic_eq(a->right, b->right);
  }
  return false;
}

bool type_contains_and_or(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::And:
    case Type::Kind::Or: return true;
    case Type::Kind::Arrow:
      return type_contains_and_or(t->left) || type_contains_and_or(t->right);
    case Type::Kind::Mu: return type_contains_and_or(t->body);
    default: return false;
  }
}

bool type_contains_mu(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Mu: return true;
    case Type::Kind::Arrow:
    case Type::Kind::And:
    case Type::Kind::Or: return type_contains_mu(t->left) || type_contains_mu(t->right);
    default: return false;
  }
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Const: return a->value == b->value;
    case Expr::Kind::Abs:
      if (a->name != b->name) return false;
      if (a->anno.has_value() != b->anno.has_value()) return false;
      if (a->anno && !type_syntactic_eq(*a->anno, *b->anno)) return false;
      return expr_eq(a->body, b->body);
    case Expr::Kind::Succ: return expr_eq(a->body, b->body);
    case Expr::Kind::App:
    case Expr::Kind::Choice:
    case Expr::Kind::Plus:
      return expr_eq(a->left, b->left) && expr_eq(a->right, b->right);
  }
  return false;
}

void free_vars(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Var: out.insert(e->name); break;
    case Expr::Kind::Const: break;
    case Expr::Kind::Abs: {
      std::set<std::string> inner;
      free_vars(e->body, inner);
      inner.erase(e->name);
      out.insert(inner.begin(), inner.end());
      break;
    }
    case Expr::Kind::Succ: free_vars(e->body, out); break;
    case Expr::Kind::App:
    case Expr::Kind::Choice:
    case Expr::Kind::Plus:
      free_vars(e->left, out);
      free_vars(e->right, out);
      break;
  }
}

bool is_closed(const ExprPtr& e) {
  std::set<std::string> fv;
  free_vars(e, fv);
  return fv.empty();
}

// Variable occurrences cost nothing so that self-application terms land in
// small exhaustive corpora; every other node costs one.
int expr_size(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var: return 0;
    case Expr::Kind::Const: return 1;
    case Expr::Kind::Abs: return 1 + expr_size(e->body);
    case Expr::Kind::Succ: return 1 + expr_size(e->body);
    case Expr::Kind::App:
    case Expr::Kind::Choice:
    case Expr::Kind::Plus:
      return 1 + expr_size(e->left) + expr_size(e->right);
  }
  return 1;
}

std::vector<ExprPtr> subexprs(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  std::vector<ExprPtr> stack{e};
  while (!stack.empty()) {
    ExprPtr cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    switch (cur->kind) {
      case Expr::Kind::Abs:
      case Expr::Kind::Succ: stack.push_back(cur->body); break;
      case Expr::Kind::App:
      case Expr::Kind::Choice:
      case Expr::Kind::Plus:
        stack.push_back(cur->left);
        stack.push_back(cur->right);
        break;
      default: break;
    }
  }
  return out;
}

ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  assert(is_closed(v) && "only closed values are substituted");
  switch (e->kind) {
    case Expr::Kind::Var: return e->name == x ? v : e;
    case Expr::Kind::Const: return e;
    case Expr::Kind::Abs:
      if (e->name == x) return e;  // shadowed
      return e_abs(e->name, substitute(e->body, x, v), e->anno);
    case Expr::Kind::Succ: return e_succ(substitute(e->body, x, v));
    case Expr::Kind::App: return e_app(substitute(e->left, x, v), substitute(e->right, x, v));
    case Expr::Kind::Choice:
      return e_choice(substitute(e->left, x, v), substitute(e->right, x, v));
    case Expr::Kind::Plus: return e_plus(substitute(e->left, x, v), substitute(e->right, x, v));
  }
  return e;
}

ExprPtr abstract_occurrences(const ExprPtr& e, const ExprPtr& needle, const std::string& x) {
  if (expr_eq(e, needle)) return e_var(x);
  switch (e->kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Const: return e;
    case Expr::Kind::Abs:
      return e_abs(e->name, abstract_occurrences(e->body, needle, x), e->anno);
    case Expr::Kind::Succ: return e_succ(abstract_occurrences(e->body, needle, x));
    case Expr::Kind::App:
      return e_app(abstract_occurrences(e->left, needle, x),
                   abstract_occurrences(e->right, needle, x));
    case Expr::Kind::Choice:
      return e_choice(abstract_occurrences(e->left, needle, x),
                      abstract_occurrences(e->right, needle, x));
    case Expr::Kind::Plus:
      return e_plus(abstract_occurrences(e->left, needle, x),
                    abstract_occurrences(e->right, needle, x));
  }
  return e;
}

// --------------------------------------------------------------------------
// Parsing
// --------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Ident, Number, Sym, End };
  Kind kind;
  std::string text;
  long number = 0;
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "parse error at offset " << tok_.pos << ": " << what;
    if (tok_.kind != Token::Kind::End) os << " (got '" << tok_.text << "')";
    throw ParseError(os.str());
  }

  bool at_sym(const std::string& s) const {
    return tok_.kind == Token::Kind::Sym && tok_.text == s;
  }
  bool at_ident(const std::string& s) const {
    return tok_.kind == Token::Kind::Ident && tok_.text == s;
  }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail("expected '" + s + "'");
    advance();
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_ = Token{Token::Kind::End, "", 0, i_};
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
        ++i_;
      tok_ = Token{Token::Kind::Ident, src_.substr(start, i_ - start), 0, start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i_;
      long n = 0;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        n = n * 10 + (src_[i_] - '0');
        ++i_;
      }
      tok_ = Token{Token::Kind::Number, src_.substr(start, i_ - start), n, start};
      return;
    }
    // multi-char symbols first
    static const char* syms[] = {"(+)", "->", "(", ")", ".", ":", "+", "&", "|"};
    for (const char* s : syms) {
      size_t len = std::string(s).size();
      if (src_.compare(i_, len, s) == 0) {
        tok_ = Token{Token::Kind::Sym, s, 0, i_};
        i_ += len;
        return;
      }
    }
    std::ostringstream os;
    os << "parse error at offset " << i_ << ": unexpected character '" << c << "'";
    throw ParseError(os.str());
  }

  const std::string& src_;
  size_t i_ = 0;
  Token tok_;
};

bool is_keyword(const std::string& s) {
  return s == "fun" || s == "succ" || s == "rec" || s == "nat" || s == "even" || s == "odd";
}

TypePtr parse_type_at(Lexer& lx, int level);

TypePtr parse_type_atom(Lexer& lx) {
  if (lx.at_sym("(")) {
    lx.take();
    TypePtr t = parse_type_at(lx, 0);
    lx.expect_sym(")");
    return t;
  }
  if (lx.peek().kind == Token::Kind::Ident) {
    std::string name = lx.take().text;
    if (name == "nat") return t_nat();
    if (name == "even") return t_even();
    if (name == "odd") return t_odd();
    if (name == "rec") lx.fail("unexpected 'rec'");
    return t_var(name);
  }
  lx.fail("expected a type");
}

// levels: 0 or/rec, 1 and, 2 arrow, 3 atom
TypePtr parse_type_at(Lexer& lx, int level) {
  if (lx.at_ident("rec")) {
    if (level > 0) lx.fail("'rec' must be parenthesized here");
    lx.take();
    if (lx.peek().kind != Token::Kind::Ident || is_keyword(lx.peek().text))
      lx.fail("expected a type variable after 'rec'");
    std::string name = lx.take().text;
    lx.expect_sym(".");
    return t_mu(name, parse_type_at(lx, 0));
  }
  if (level >= 3) return parse_type_atom(lx);
  if (level == 2) {
    TypePtr l = parse_type_atom(lx);
    if (lx.at_sym("->")) {
      lx.take();
      return t_arrow(l, parse_type_at(lx, 2));
    }
    return l;
  }
  TypePtr l = parse_type_at(lx, level + 1);
  const char* op = level == 0 ? "|" : "&";
  while (lx.at_sym(op)) {
    lx.take();
    TypePtr r = parse_type_at(lx, level + 1);
    l = level == 0 ? t_or(l, r) : t_and(l, r);
  }
  return l;
}

ExprPtr parse_expr_at(Lexer& lx, int level);

ExprPtr parse_atom(Lexer& lx) {
  if (lx.at_sym("(")) {
    lx.take();
    ExprPtr e = parse_expr_at(lx, 0);
    lx.expect_sym(")");
    return e;
  }
  if (lx.peek().kind == Token::Kind::Number) return e_const(lx.take().number);
  if (lx.peek().kind == Token::Kind::Ident) {
    if (is_keyword(lx.peek().text)) lx.fail("unexpected keyword");
    return e_var(lx.take().text);
  }
  lx.fail("expected an expression");
}

ExprPtr parse_prefix(Lexer& lx) {
  if (lx.at_ident("succ")) {
    lx.take();
    return e_succ(parse_prefix(lx));
  }
  if (lx.at_sym("+")) {
    lx.take();
    ExprPtr l = parse_atom(lx);
    ExprPtr r = parse_atom(lx);
    return e_plus(l, r);
  }
  return parse_atom(lx);
}

bool starts_operand(const Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number) return true;
  if (t.kind == Token::Kind::Ident) return t.text == "succ" || !is_keyword(t.text);
  if (t.kind == Token::Kind::Sym) return t.text == "(" || t.text == "+";
  return false;
}

// levels: 0 fun, 1 choice, 2 app
ExprPtr parse_expr_at(Lexer& lx, int level) {
  if (lx.at_ident("fun")) {
    if (level > 0) lx.fail("'fun' must be parenthesized here");
    lx.take();
    if (lx.peek().kind != Token::Kind::Ident || is_keyword(lx.peek().text))
      lx.fail("expected a variable after 'fun'");
    std::string name = lx.take().text;
    std::optional<TypePtr> anno;
    if (lx.at_sym(":")) {
      lx.take();
      anno = parse_type_at(lx, 0);
    }
    lx.expect_sym(".");
    return e_abs(name, parse_expr_at(lx, 0), anno);
  }
  if (level >= 2) {
    ExprPtr e = parse_prefix(lx);
    while (starts_operand(lx)) e = e_app(e, parse_prefix(lx));
    return e;
  }
  ExprPtr l = parse_expr_at(lx, level + 1);
  if (level == 1) return l;
  while (lx.at_sym("(+)")) {
    lx.take();
    l = e_choice(l, parse_expr_at(lx, 2));
  }
  return l;
}

}  // namespace

ExprPtr parse_expr(const std::string& text) {
  Lexer lx(text);
  ExprPtr e = parse_expr_at(lx, 0);
  if (lx.peek().kind != Token::Kind::End) lx.fail("trailing input");
  return e;
}

TypePtr parse_type(const std::string& text) {
  Lexer lx(text);
  TypePtr t = parse_type_at(lx, 0);
  if (lx.peek().kind != Token::Kind::End) lx.fail("trailing input");
  return t;
}

Config to_config(const ExprPtr& e) { return Config::make(e, print_expr(e)); }

ExprPtr expr_of(const Config& c) { return c.payload_ptr<Expr>(); }

}  // namespace bsw::lam
