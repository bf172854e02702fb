// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsw/lambda/ast.hpp"
#include "bsw/soundness.hpp"

namespace bsw::lam {

using TypeEnv = std::map<std::string, TypePtr>;

// rec-types are contractive when the bound variable occurs only under an
// arrow; this is what makes head unfolding terminate.
bool type_contractive(const TypePtr& t);

/// Equality of the infinite regular trees denoted by equi-recursive types,
/// decided by bisimulation over the mu-unfolding graph. Rejects types with
/// intersection or union nodes.
bool type_equal(const TypePtr& a, const TypePtr& b);

/// Checks Gamma |- e : T in the simply-typed system with equi-recursive
/// types. Syntax-directed; application domains are searched among annotation
/// derived candidates plus the given finite universe.
bool typecheck_simple(const TypeEnv& env, const ExprPtr& e, const TypePtr& t,
                      const std::vector<TypePtr>& universe);

/// The inductive preorder generated by the intersection/union axioms
/// (projections out of intersections, injections into unions).
bool subtype_iu(const TypePtr& a, const TypePtr& b);

struct IuOptions {
  bool with_orE = false;  // enable the (unsound with choice) union elimination
  bool arith = false;     // even/odd constant typings and the prefix + type
  int depth = 8;
};

/// Bounded proof search in the intersection/union system over the structural
/// base rules; candidate types for application domains and union eliminations
/// come from the universe.
bool typable_iu(const TypeEnv& env, const ExprPtr& e, const TypePtr& t,
                const std::vector<TypePtr>& universe, const IuOptions& opts);

// --- Predicate plug-ins ------------------------------------------------------

std::vector<TypePtr> simple_type_universe();
std::vector<TypePtr> iu_type_universe();

PredicateIndex type_index(const TypePtr& t);

/// Simple recursive types as an indexed predicate, with the per-rule witness
/// oracle mirroring the textbook preservation proof.
IndexedPredicate simple_types_predicate();

/// Same predicate extended with the unsound typing of 0 0 at nat, the
/// forall-progress counterexample.
IndexedPredicate simple_types_fool_predicate();

/// Intersection/union types (arithmetic extension included) as an indexed
/// predicate; with_orE toggles the union-elimination rule.
IndexedPredicate iu_types_predicate(bool with_orE);

}  // namespace bsw::lam
