// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "bsw/kernel.hpp"
#include "bsw/lambda/ast.hpp"

namespace bsw::lam {

struct SemanticsOptions {
  bool with_succ = true;   // dropping succ yields the S2 counterexample semantics
  bool with_plus = false;  // arithmetic extension used by the union-type tests
};

// The call-by-value lambda calculus with constants, successor and
// non-deterministic choice, as schedulers over closed expressions.
SemanticsDef lam_semantics(SemanticsOptions opts = {});

inline SemanticsDef lam_semantics_no_succ() {
  return lam_semantics({.with_succ = false, .with_plus = false});
}
inline SemanticsDef lam_arith_semantics() {
  return lam_semantics({.with_succ = true, .with_plus = true});
}

}  // namespace bsw::lam
