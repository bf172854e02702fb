// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsw/fj/semantics.hpp"
#include "bsw/soundness.hpp"

namespace bsw::fj {

/// Parses a program and verifies every well-formedness and method-body typing
/// constraint of the given calculus; violations name the constraint.
ClassTable load_class_table(const std::string& source, Flavor flavor);
TablePtr load_table_ptr(const std::string& source, Flavor flavor);

// --- MiniFJ&lambda -----------------------------------------------------------

using FjlEnv = std::map<std::string, std::string>;  // variable -> declared type

/// Algorithmic typing: the minimal class/interface type of an expression, or
/// nullopt. Bare lambdas have no type of their own; lambda arguments are
/// checked exactly against their target type.
std::optional<std::string> typecheck_fjl(const ClassTable& ct, const FjlEnv& env,
                                         const ExprPtr& e);
/// A lambda checks against a functional interface target.
bool fjl_lambda_checks(const ClassTable& ct, const ExprPtr& lam, const std::string& target);
/// A result value fits a type up to subtyping (lambdas may sit at a subtype,
/// as in the configuration and object typing rules).
bool fjl_value_fits(const ClassTable& ct, const ExprPtr& value, const std::string& type);

IndexedPredicate fjl_predicate(TablePtr ct);

// --- MiniFJ&O ----------------------------------------------------------------

/// Expression types: bool, or a canonicalized nonempty union of classes.
struct FjoType {
  bool is_bool = false;
  std::vector<std::string> classes;  // sorted, unique

  static FjoType boolean() { return {true, {}}; }
  static FjoType single(std::string c) { return {false, {std::move(c)}}; }
  static FjoType unions(std::vector<std::string> cs);
  std::string text() const;

  friend bool operator==(const FjoType& a, const FjoType& b) {
    return a.is_bool == b.is_bool && a.classes == b.classes;
  }
};

/// The union-subtype relation on canonical types: set inclusion, plus the
/// nominal hierarchy lift for single classes.
bool fjo_subtype(const ClassTable& ct, const FjoType& a, const FjoType& b);

/// Bounded derivability search for Gamma |- e : T, selecting intersection
/// components and the duplicated-argument split of the invocation rule.
bool typecheck_fjo(const ClassTable& ct, const std::map<std::string, std::string>& env,
                   const ExprPtr& e, const FjoType& t, int depth);

IndexedPredicate fjo_predicate(TablePtr ct);

// --- Imperative FJ -------------------------------------------------------

using TypeAssignment = std::map<long, std::string>;  // object id -> class

/// The minimal class of an expression under Gamma and Sigma.
std::optional<std::string> typecheck_fji(const ClassTable& ct,
                                         const std::map<std::string, std::string>& env,
                                         const TypeAssignment& sigma, const ExprPtr& e);

/// P_(Sigma,C): some Sigma' extending Sigma with dom(Sigma') = dom(mu) types
/// the configuration at C. The unique candidate is the allocation-recorded
/// assignment of the memory.
bool fji_config_holds(const ClassTable& ct, const TypeAssignment& sigma, const std::string& cls,
                      const Config& config);

IndexedPredicate fji_predicate(TablePtr ct);

}  // namespace bsw::fj
