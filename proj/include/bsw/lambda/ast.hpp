// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bsw/config.hpp"

namespace bsw::lam {

// ---------------------------------------------------------------------------
// Types: nat | even | odd | T1 -> T2 | type variable | rec a . T | T&T | T|T
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Nat, Even, Odd, Arrow, Var, Mu, And, Or };
  Kind kind;
  std::string name;       // Var, Mu binder
  TypePtr left, right;    // Arrow dom/cod, And, Or
  TypePtr body;           // Mu
};

TypePtr t_nat();
TypePtr t_even();
TypePtr t_odd();
TypePtr t_arrow(TypePtr dom, TypePtr cod);
TypePtr t_var(std::string name);
TypePtr t_mu(std::string name, TypePtr body);
TypePtr t_and(TypePtr l, TypePtr r);
TypePtr t_or(TypePtr l, TypePtr r);

std::string print_type(const TypePtr& t);
// Structural (syntactic) equality; see types.hpp for the equi-recursive one.
bool type_syntactic_eq(const TypePtr& a, const TypePtr& b);
bool type_contains_and_or(const TypePtr& t);
bool type_contains_mu(const TypePtr& t);

// ---------------------------------------------------------------------------
// Expressions: x | n | fun x [: T] . e | e e | succ e | e (+) e | + e e
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Const, Abs, App, Succ, Choice, Plus };
  Kind kind;
  std::string name;               // Var, Abs binder
  long value = 0;                 // Const
  std::optional<TypePtr> anno;    // Abs annotation if present
  ExprPtr left, right;            // App fun/arg, Choice, Plus
  ExprPtr body;                   // Abs, Succ
};

ExprPtr e_var(std::string name);
ExprPtr e_const(long n);
ExprPtr e_abs(std::string name, ExprPtr body, std::optional<TypePtr> anno = std::nullopt);
ExprPtr e_app(ExprPtr f, ExprPtr a);
ExprPtr e_succ(ExprPtr e);
ExprPtr e_choice(ExprPtr l, ExprPtr r);
ExprPtr e_plus(ExprPtr l, ExprPtr r);

bool is_value(const Expr& e);  // v ::= n | fun x . e
std::string print_expr(const ExprPtr& e);
bool expr_eq(const ExprPtr& a, const ExprPtr& b);
void free_vars(const ExprPtr& e, std::set<std::string>& out);
bool is_closed(const ExprPtr& e);
int expr_size(const ExprPtr& e);  // enumeration size; variable occurrences are free
std::vector<ExprPtr> subexprs(const ExprPtr& e);  // e itself plus all subterms

// Substitution e[v/x]. Only closed replacements are ever substituted by the
// semantics, so no capture can occur; asserts that invariant.
ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& v);

// Replaces every occurrence of `needle` in `e` by variable `x` (inverse of
// substitution, used by the union-elimination search).
ExprPtr abstract_occurrences(const ExprPtr& e, const ExprPtr& needle, const std::string& x);

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Concrete syntax (.lam). Both throw ParseError with a position on bad input.
ExprPtr parse_expr(const std::string& text);
TypePtr parse_type(const std::string& text);

// Config embedding. Identity is the printed form.
Config to_config(const ExprPtr& e);
ExprPtr expr_of(const Config& c);

}  // namespace bsw::lam
