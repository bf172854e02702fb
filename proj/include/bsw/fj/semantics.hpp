// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>

#include "bsw/fj/class_table.hpp"
#include "bsw/kernel.hpp"

namespace bsw::fj {

/// Configurations of the Java-like calculi. MiniFJ&O uses plain closed
/// expressions; MiniFJ&lambda pairs an environment with an expression (values
/// stand alone); imperative FJ pairs a memory with an expression.
struct FjConfig {
  enum class Kind { Plain, EnvExpr, MemExpr };
  Kind kind = Kind::Plain;
  std::map<std::string, ExprPtr> env;  // variable -> value
  std::map<long, ExprPtr> memory;      // object id -> object state (new C(@i...))
  ExprPtr expr;
};

Config plain_config(ExprPtr e);
// Canonicalizes <env, v> for value forms to the bare value (lambda bodies
// only mention their own parameters, so the environment is irrelevant).
Config env_config(std::map<std::string, ExprPtr> env, ExprPtr e);
Config mem_config(std::map<long, ExprPtr> memory, ExprPtr e);

const FjConfig& fj_of(const Config& c);
std::string print_config(const FjConfig& c);

bool is_fjl_value(const ExprPtr& e);  // object C(v...) or lambda
bool is_fjo_value(const ExprPtr& e);  // true/false or new C(v...) over values

using TablePtr = std::shared_ptr<const ClassTable>;

SemanticsDef fjl_semantics(TablePtr ct);
SemanticsDef fjo_semantics(TablePtr ct);
SemanticsDef fji_semantics(TablePtr ct);

}  // namespace bsw::fj
