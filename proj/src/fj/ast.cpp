// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/fj/ast.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace bsw::fj {

ExprPtr e_var(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.name = std::move(name);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_field(ExprPtr recv, std::string field) {
  Expr e;
  e.kind = Expr::Kind::FieldAccess;
  e.name = std::move(field);
  e.recv = std::move(recv);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_new(std::string cls, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = Expr::Kind::New;
  e.name = std::move(cls);
  e.args = std::move(args);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_invoke(ExprPtr recv, std::string method, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = Expr::Kind::Invoke;
  e.name = std::move(method);
  e.recv = std::move(recv);
  e.args = std::move(args);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_lambda(std::vector<std::string> params, ExprPtr body) {
  Expr e;
  e.kind = Expr::Kind::Lambda;
  e.params = std::move(params);
  e.body = std::move(body);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_cast(std::string type, ExprPtr body) {
  Expr e;
  e.kind = Expr::Kind::Cast;
  e.name = std::move(type);
  e.recv = std::move(body);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_if(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
  Expr e;
  e.kind = Expr::Kind::If;
  e.recv = std::move(cond);
  e.body = std::move(then_e);
  e.alt = std::move(else_e);
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_bool(bool v) {
  Expr e;
  e.kind = Expr::Kind::BoolLit;
  e.bval = v;
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_oid(long id) {
  Expr e;
  e.kind = Expr::Kind::ObjectId;
  e.oid = id;
  return std::make_shared<Expr>(std::move(e));
}
ExprPtr e_object(std::string cls, std::vector<ExprPtr> fields) {
  Expr e;
  e.kind = Expr::Kind::ObjectVal;
  e.name = std::move(cls);
  e.args = std::move(fields);
  return std::make_shared<Expr>(std::move(e));
}

// --------------------------------------------------------------------------
// Printing. Levels: 0 topmost (if, lambda, assignment), 1 postfix, 2 atom.
// --------------------------------------------------------------------------

namespace {

void print_at(const ExprPtr& e, int level, std::ostream& os) {
  auto paren = [&](int mine, auto&& body) {
    if (level > mine) os << '(';
    body();
    if (level > mine) os << ')';
  };
  switch (e->kind) {
    case Expr::Kind::Var: os << e->name; break;
    case Expr::Kind::BoolLit: os << (e->bval ? "true" : "false"); break;
    case Expr::Kind::ObjectId: os << '@' << e->oid; break;
    case Expr::Kind::New:
    case Expr::Kind::ObjectVal: {
      os << (e->kind == Expr::Kind::New ? "new " : "object ") << e->name << '(';
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) os << ", ";
        print_at(e->args[i], 0, os);
      }
      os << ')';
      break;
    }
    case Expr::Kind::FieldAccess:
      paren(1, [&] {
        print_at(e->recv, 1, os);
        os << '.' << e->name;
      });
      break;
    case Expr::Kind::Invoke:
      paren(1, [&] {
        print_at(e->recv, 1, os);
        os << '.' << e->name << '(';
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) os << ", ";
          print_at(e->args[i], 0, os);
        }
        os << ')';
      });
      break;
    case Expr::Kind::Lambda:
      paren(0, [&] {
        os << '(';
        for (size_t i = 0; i < e->params.size(); ++i) {
          if (i) os << ", ";
          os << e->params[i];
        }
        os << ") -> ";
        print_at(e->body, 0, os);
      });
      break;
    case Expr::Kind::Cast:
      paren(0, [&] {
        os << '<' << e->name << "> ";
        // a lambda brings its own parentheses
        print_at(e->recv, e->recv->kind == Expr::Kind::Lambda ? 0 : 1, os);
      });
      break;
    case Expr::Kind::If:
      paren(0, [&] {
        os << "if ";
        print_at(e->recv, 1, os);
        os << " then ";
        print_at(e->body, 1, os);
        os << " else ";
        print_at(e->alt, 1, os);
      });
      break;
    case Expr::Kind::FieldAssign:
      paren(0, [&] {
        print_at(e->recv, 1, os);
        os << '.' << e->name << " = ";
        print_at(e->body, 0, os);
      });
      break;
  }
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_at(e, 0, os);
  return os.str();
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  return print_expr(a) == print_expr(b);
}

int expr_size(const ExprPtr& e) {
  int n = 0;
  switch (e->kind) {
    case Expr::Kind::Var: return 0;
    case Expr::Kind::BoolLit:
    case Expr::Kind::ObjectId: return 1;
    case Expr::Kind::New:
    case Expr::Kind::ObjectVal:
      n = 1;
      for (const ExprPtr& a : e->args) n += expr_size(a);
      return n;
    case Expr::Kind::FieldAccess: return 1 + expr_size(e->recv);
    case Expr::Kind::Invoke:
      n = 1 + expr_size(e->recv);
      for (const ExprPtr& a : e->args) n += expr_size(a);
      return n;
    case Expr::Kind::Lambda: return 1 + expr_size(e->body);
    case Expr::Kind::Cast: return 1 + expr_size(e->recv);
    case Expr::Kind::If: return 1 + expr_size(e->recv) + expr_size(e->body) + expr_size(e->alt);
    case Expr::Kind::FieldAssign: return 1 + expr_size(e->recv) + expr_size(e->body);
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
    if (cur->recv) stack.push_back(cur->recv);
    if (cur->body) stack.push_back(cur->body);
    if (cur->alt) stack.push_back(cur->alt);
    for (const ExprPtr& a : cur->args) stack.push_back(a);
  }
  return out;
}

void free_vars(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Var: out.insert(e->name); break;
    case Expr::Kind::Lambda: {
      std::set<std::string> inner;
      free_vars(e->body, inner);
      for (const std::string& p : e->params) inner.erase(p);
      out.insert(inner.begin(), inner.end());
      break;
    }
    default:
      if (e->recv) free_vars(e->recv, out);
      if (e->body) free_vars(e->body, out);
      if (e->alt) free_vars(e->alt, out);
      for (const ExprPtr& a : e->args) free_vars(a, out);
      break;
  }
}

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = sub.find(e->name);
      return it != sub.end() ? it->second : e;
    }
    case Expr::Kind::BoolLit:
    case Expr::Kind::ObjectId: return e;
    case Expr::Kind::Lambda: {
      std::map<std::string, ExprPtr> inner = sub;
      for (const std::string& p : e->params) inner.erase(p);
      if (inner.empty()) return e;
      return e_lambda(e->params, substitute(e->body, inner));
    }
    case Expr::Kind::FieldAccess: return e_field(substitute(e->recv, sub), e->name);
    case Expr::Kind::Cast: return e_cast(e->name, substitute(e->recv, sub));
    case Expr::Kind::If:
      return e_if(substitute(e->recv, sub), substitute(e->body, sub), substitute(e->alt, sub));
    case Expr::Kind::FieldAssign:
      return std::make_shared<Expr>([&] {
        Expr out;
        out.kind = Expr::Kind::FieldAssign;
        out.name = e->name;
        out.recv = substitute(e->recv, sub);
        out.body = substitute(e->body, sub);
        return out;
      }());
    case Expr::Kind::New:
    case Expr::Kind::ObjectVal: {
      std::vector<ExprPtr> args;
      for (const ExprPtr& a : e->args) args.push_back(substitute(a, sub));
      return e->kind == Expr::Kind::New ? e_new(e->name, std::move(args))
                                        : e_object(e->name, std::move(args));
    }
    case Expr::Kind::Invoke: {
      std::vector<ExprPtr> args;
      for (const ExprPtr& a : e->args) args.push_back(substitute(a, sub));
      return e_invoke(substitute(e->recv, sub), e->name, std::move(args));
    }
  }
  return e;
}

// --------------------------------------------------------------------------
// Parsing
// --------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Ident, Sym, Number, End };
  Kind kind;
  std::string text;
  long number = 0;
  size_t pos = 0;
};

const std::set<std::string> kKeywords = {"class",  "interface", "extends", "implements",
                                         "return", "new",       "if",      "then",
                                         "else",   "true",      "false",   "object"};

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
  bool at_plain_ident() const {
    return tok_.kind == Token::Kind::Ident && kKeywords.count(tok_.text) == 0;
  }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail("expected '" + s + "'");
    advance();
  }
  std::string expect_ident() {
    if (!at_plain_ident()) fail("expected an identifier");
    return take().text;
  }

  size_t save() const { return mark_; }
  void restore(size_t m) {
    i_ = m;
    advance();
  }

 private:
  void advance() {
    while (i_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
        ++i_;
      } else if (src_.compare(i_, 2, "//") == 0) {
        while (i_ < src_.size() && src_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
    mark_ = i_;
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
    static const char* syms[] = {"->", "(", ")", "{", "}", "<", ">", ".", ",", ";", "=", "&", "@"};
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
  size_t mark_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lx_(src) {}

  Program program() {
    Program p;
    while (lx_.at_ident("class") || lx_.at_ident("interface")) {
      if (lx_.at_ident("class"))
        class_def(p);
      else
        interface_def(p);
    }
    if (lx_.peek().kind != Token::Kind::End) p.main = expr();
    if (lx_.peek().kind != Token::Kind::End) lx_.fail("trailing input");
    return p;
  }

  ExprPtr bare_expr() {
    ExprPtr e = expr();
    if (lx_.peek().kind != Token::Kind::End) lx_.fail("trailing input");
    return e;
  }

 private:
  void class_def(Program& p) {
    lx_.take();  // class
    ClassDef cd;
    cd.name = lx_.expect_ident();
    cd.super = "Object";
    if (lx_.at_ident("extends")) {
      lx_.take();
      cd.super = lx_.expect_ident();
    }
    if (lx_.at_ident("implements")) {
      lx_.take();
      cd.interfaces.push_back(lx_.expect_ident());
      while (lx_.at_sym(",")) {
        lx_.take();
        cd.interfaces.push_back(lx_.expect_ident());
      }
    }
    lx_.expect_sym("{");
    while (!lx_.at_sym("}")) member(cd);
    lx_.take();
    if (p.classes.count(cd.name)) throw ParseError("duplicate class " + cd.name);
    p.class_order.push_back(cd.name);
    p.classes.emplace(cd.name, std::move(cd));
  }

  // field:  Type name ;
  // method: Type name ( params ) [& Type name ( params )]* { return e ; }
  void member(ClassDef& cd) {
    std::string type = lx_.expect_ident();
    std::string name = lx_.expect_ident();
    if (lx_.at_sym(";")) {
      lx_.take();
      for (const auto& [_, f] : cd.fields)
        if (f == name) throw ParseError("duplicate field " + name + " in class " + cd.name);
      cd.fields.emplace_back(type, name);
      return;
    }
    MethodDef md;
    md.name = name;
    MethodSig sig;
    sig.ret = type;
    params_into(sig, md, true);
    md.components.push_back(sig);
    while (lx_.at_sym("&")) {
      lx_.take();
      MethodSig more;
      more.ret = lx_.expect_ident();
      std::string again = lx_.expect_ident();
      if (again != md.name) lx_.fail("intersection components must share the method name");
      params_into(more, md, false);
      md.components.push_back(more);
    }
    lx_.expect_sym("{");
    if (!lx_.at_ident("return")) lx_.fail("expected 'return'");
    lx_.take();
    md.body = expr();
    lx_.expect_sym(";");
    lx_.expect_sym("}");
    if (cd.methods.count(md.name))
      throw ParseError("overloaded method " + md.name + " in class " + cd.name);
    cd.methods.emplace(md.name, std::move(md));
  }

  void params_into(MethodSig& sig, MethodDef& md, bool record_names) {
    lx_.expect_sym("(");
    std::vector<std::string> names;
    if (!lx_.at_sym(")")) {
      for (;;) {
        sig.param_types.push_back(lx_.expect_ident());
        names.push_back(lx_.expect_ident());
        if (!lx_.at_sym(",")) break;
        lx_.take();
      }
    }
    lx_.expect_sym(")");
    if (record_names) {
      md.params = names;
    } else if (names != md.params) {
      throw ParseError("intersection components of " + md.name +
                       " must use the same parameter names");
    }
  }

  void interface_def(Program& p) {
    lx_.take();  // interface
    InterfaceDef idf;
    idf.name = lx_.expect_ident();
    if (lx_.at_ident("extends")) {
      lx_.take();
      idf.supers.push_back(lx_.expect_ident());
      while (lx_.at_sym(",")) {
        lx_.take();
        idf.supers.push_back(lx_.expect_ident());
      }
    }
    lx_.expect_sym("{");
    while (!lx_.at_sym("}")) {
      MethodSig sig;
      sig.ret = lx_.expect_ident();
      std::string name = lx_.expect_ident();
      lx_.expect_sym("(");
      if (!lx_.at_sym(")")) {
        for (;;) {
          sig.param_types.push_back(lx_.expect_ident());
          lx_.expect_ident();  // parameter name, not recorded
          if (!lx_.at_sym(",")) break;
          lx_.take();
        }
      }
      lx_.expect_sym(")");
      lx_.expect_sym(";");
      if (idf.sigs.count(name))
        throw ParseError("overloaded interface method " + name + " in " + idf.name);
      idf.sigs.emplace(name, std::move(sig));
    }
    lx_.take();
    if (p.interfaces.count(idf.name)) throw ParseError("duplicate interface " + idf.name);
    p.interfaces.emplace(idf.name, std::move(idf));
  }

  // expr := if | lambda | cast | assign-chain over postfix
  ExprPtr expr() {
    if (lx_.at_ident("if")) {
      lx_.take();
      ExprPtr cond = postfix();
      if (!lx_.at_ident("then")) lx_.fail("expected 'then'");
      lx_.take();
      ExprPtr t = postfix();
      if (!lx_.at_ident("else")) lx_.fail("expected 'else'");
      lx_.take();
      ExprPtr f = postfix();
      return e_if(cond, t, f);
    }
    if (lx_.at_sym("<")) {
      lx_.take();
      std::string type = lx_.expect_ident();
      lx_.expect_sym(">");
      return e_cast(type, postfix());
    }
    if (auto lam = try_lambda()) return *lam;
    ExprPtr e = postfix();
    if (lx_.at_sym("=")) {
      if (e->kind != Expr::Kind::FieldAccess) lx_.fail("only fields can be assigned");
      lx_.take();
      ExprPtr rhs = expr();
      Expr out;
      out.kind = Expr::Kind::FieldAssign;
      out.name = e->name;
      out.recv = e->recv;
      out.body = rhs;
      return std::make_shared<Expr>(std::move(out));
    }
    return e;
  }

  // ( x1, ..., xn ) -> e   with one token of arbitrary lookahead via rescan
  std::optional<ExprPtr> try_lambda() {
    if (!lx_.at_sym("(")) return std::nullopt;
    size_t mark = lx_.save();
    lx_.take();
    std::vector<std::string> params;
    bool shape_ok = true;
    if (lx_.at_plain_ident()) {
      params.push_back(lx_.take().text);
      while (lx_.at_sym(",")) {
        lx_.take();
        if (!lx_.at_plain_ident()) {
          shape_ok = false;
          break;
        }
        params.push_back(lx_.take().text);
      }
    } else {
      shape_ok = false;
    }
    if (shape_ok && lx_.at_sym(")")) {
      lx_.take();
      if (lx_.at_sym("->")) {
        lx_.take();
        ExprPtr body = expr();
        if (body->kind == Expr::Kind::Lambda)
          lx_.fail("a lambda body must not itself be a lambda");
        return e_lambda(std::move(params), body);
      }
    }
    lx_.restore(mark);
    return std::nullopt;
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    for (;;) {
      if (lx_.at_sym(".")) {
        lx_.take();
        std::string name = lx_.expect_ident();
        if (lx_.at_sym("(")) {
          lx_.take();
          std::vector<ExprPtr> args;
          if (!lx_.at_sym(")")) {
            for (;;) {
              args.push_back(expr());
              if (!lx_.at_sym(",")) break;
              lx_.take();
            }
          }
          lx_.expect_sym(")");
          e = e_invoke(e, name, std::move(args));
        } else {
          e = e_field(e, name);
        }
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr primary() {
    if (lx_.at_ident("new") || lx_.at_ident("object")) {
      bool value_form = lx_.take().text == "object";
      std::string cls = lx_.expect_ident();
      lx_.expect_sym("(");
      std::vector<ExprPtr> args;
      if (!lx_.at_sym(")")) {
        for (;;) {
          args.push_back(expr());
          if (!lx_.at_sym(",")) break;
          lx_.take();
        }
      }
      lx_.expect_sym(")");
      return value_form ? e_object(cls, std::move(args)) : e_new(cls, std::move(args));
    }
    if (lx_.at_ident("true")) {
      lx_.take();
      return e_bool(true);
    }
    if (lx_.at_ident("false")) {
      lx_.take();
      return e_bool(false);
    }
    if (lx_.at_sym("@")) {
      lx_.take();
      if (lx_.peek().kind != Token::Kind::Number) lx_.fail("expected an object identifier");
      return e_oid(lx_.take().number);
    }
    if (lx_.at_sym("(")) {
      if (auto lam = try_lambda()) return *lam;
      lx_.take();
      ExprPtr e = expr();
      lx_.expect_sym(")");
      return e;
    }
    if (lx_.at_ident("if") || lx_.at_sym("<")) return expr();
    if (lx_.at_plain_ident()) return e_var(lx_.take().text);
    lx_.fail("expected an expression");
  }

  Lexer lx_;
};

}  // namespace

Program parse_program(const std::string& source) { return Parser(source).program(); }

ExprPtr parse_fj_expr(const std::string& source) { return Parser(source).bare_expr(); }

}  // namespace bsw::fj
