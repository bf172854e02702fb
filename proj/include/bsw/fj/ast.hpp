// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsw/config.hpp"

namespace bsw::fj {

// One expression shape covers the three Java-like calculi; each calculus
// restricts itself to its own constructs.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Var,          // x
    FieldAccess,  // e.f
    New,          // new C(e...)          (the value form of MiniFJ&O when args are values)
    Invoke,       // e.m(e...)
    Lambda,       // (x1,...,xn) -> e     (MiniFJ&lambda)
    Cast,         // <T> e                (MiniFJ&lambda upcast)
    If,           // if e then e1 else e2 (MiniFJ&O)
    BoolLit,      // true | false         (MiniFJ&O)
    FieldAssign,  // e.f = e'             (imperative FJ)
    ObjectId,     // @k                   (imperative FJ, runtime only)
    ObjectVal     // object C(v...)       (MiniFJ&lambda result)
  };
  Kind kind;
  std::string name;  // Var; field; method; class (New/ObjectVal); type (Cast)
  bool bval = false;
  long oid = 0;
  ExprPtr recv;                     // receiver / cast body / if condition / assign lhs receiver
  std::vector<ExprPtr> args;       // New, Invoke, ObjectVal
  std::vector<std::string> params;  // Lambda
  ExprPtr body;                     // Lambda body; If then; FieldAssign rhs
  ExprPtr alt;                      // If else
};

ExprPtr e_var(std::string name);
ExprPtr e_field(ExprPtr recv, std::string field);
ExprPtr e_new(std::string cls, std::vector<ExprPtr> args);
ExprPtr e_invoke(ExprPtr recv, std::string method, std::vector<ExprPtr> args);
ExprPtr e_lambda(std::vector<std::string> params, ExprPtr body);
ExprPtr e_cast(std::string type, ExprPtr body);
ExprPtr e_if(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
ExprPtr e_bool(bool v);
ExprPtr e_oid(long id);
ExprPtr e_object(std::string cls, std::vector<ExprPtr> fields);

std::string print_expr(const ExprPtr& e);
bool expr_eq(const ExprPtr& a, const ExprPtr& b);
int expr_size(const ExprPtr& e);  // variable occurrences are free, as in the lambda corpus
std::vector<ExprPtr> subexprs(const ExprPtr& e);
void free_vars(const ExprPtr& e, std::set<std::string>& out);

// Simultaneous substitution of closed values for variables (and `this`).
ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub);

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// --- Declarations -----------------------------------------------------------

struct MethodSig {
  std::vector<std::string> param_types;
  std::string ret;

  friend bool operator==(const MethodSig& a, const MethodSig& b) {
    return a.param_types == b.param_types && a.ret == b.ret;
  }
};

struct MethodDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<MethodSig> components;  // one entry normally; several in MiniFJ&O
  ExprPtr body;
};

struct ClassDef {
  std::string name;
  std::string super;  // "Object" by default
  std::vector<std::string> interfaces;
  std::vector<std::pair<std::string, std::string>> fields;  // (type, name), declaration order
  std::map<std::string, MethodDef> methods;
};

struct InterfaceDef {
  std::string name;
  std::vector<std::string> supers;
  std::map<std::string, MethodSig> sigs;
};

struct Program {
  std::map<std::string, ClassDef> classes;
  std::map<std::string, InterfaceDef> interfaces;
  std::vector<std::string> class_order;  // declaration order, for reporting
  ExprPtr main;                          // optional main expression
};

/// Parses declarations plus an optional trailing main expression.
Program parse_program(const std::string& source);
/// Parses a bare expression in the .fj concrete syntax.
ExprPtr parse_fj_expr(const std::string& source);

}  // namespace bsw::fj
