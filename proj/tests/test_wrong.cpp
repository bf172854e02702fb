// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/evaluator.hpp"
#include "bsw/lambda/ast.hpp"
#include "bsw/lambda/semantics.hpp"
#include "bsw/wrong.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::lam;

namespace {

Config cfg(const std::string& s) { return to_config(parse_expr(s)); }
Result res(const std::string& s) { return Result{cfg(s)}; }

const char* kOmega = "(fun x . x x) (fun x . x x)";

}  // namespace

TEST_CASE("wrong-app: a numeral in function position is refused") {
  WrongOutcome out = eval_wrong(lam_semantics(), cfg("0 0"), 100, Strategy::first());
  REQUIRE(out.is_wrong());
  CHECK(out.evidence->kind == WrongEvidence::Kind::AllReject);
  CHECK(out.evidence->config == cfg("0 0"));
  CHECK(out.evidence->premise == 1);
  CHECK(*out.evidence->offending == res("0"));
}

TEST_CASE("wrong-succ: an abstraction under succ is refused") {
  WrongOutcome out = eval_wrong(lam_semantics(), cfg("succ (fun x . x)"), 100, Strategy::first());
  REQUIRE(out.is_wrong());
  CHECK(out.evidence->kind == WrongEvidence::Kind::AllReject);
  CHECK(out.evidence->premise == 1);
}

TEST_CASE("conservativity: converging programs keep their value") {
  WrongOutcome out =
      eval_wrong(lam_semantics(), cfg("succ ((fun x . x) 4)"), 100, Strategy::first());
  REQUIRE(out.is_value());
  CHECK(*out.value == res("5"));
}

TEST_CASE("divergence exhausts the fuel, never Wrong") {
  WrongOutcome out = eval_wrong(lam_semantics(), cfg(kOmega), 500, Strategy::first());
  CHECK(out.is_exhausted());
}

TEST_CASE("wrong propagates from subterms") {
  WrongOutcome out = eval_wrong(lam_semantics(), cfg("succ (0 0)"), 100, Strategy::first());
  REQUIRE(out.is_wrong());
  CHECK(out.evidence->kind == WrongEvidence::Kind::Propagated);
  CHECK(out.evidence->config == cfg("0 0"));
}

TEST_CASE("the wrong axiom fires on conclusion-less configurations") {
  // a free variable has no rule and is not a result
  WrongOutcome out = eval_wrong(lam_semantics(), cfg("x"), 10, Strategy::first());
  REQUIRE(out.is_wrong());
  CHECK(out.evidence->kind == WrongEvidence::Kind::NoRule);

  // dropping succ turns successor configurations into no-rule ones
  WrongOutcome nosucc =
      eval_wrong(lam_semantics_no_succ(), cfg("succ 0"), 10, Strategy::first());
  REQUIRE(nosucc.is_wrong());
  CHECK(nosucc.evidence->kind == WrongEvidence::Kind::NoRule);
}

TEST_CASE("value results coincide with the reference evaluator") {
  SemanticsDef sem = lam_semantics();
  Evaluator ev(sem);
  for (const char* s :
       {"1 (+) 2", "(fun x . succ x) (1 (+) 2)", "succ 0", "(fun x . x) (fun y . y)",
        "(0 0) (+) 1", "succ (1 (+) (0 (+) 2))"}) {
    CAPTURE(s);
    WrongAllOutcomes all = eval_wrong_all(sem, cfg(s), 500);
    CHECK(all.value_results() == ev.eval_all(cfg(s), 50));
  }
}

TEST_CASE("exclusivity on the deterministic fragment") {
  // without choice, at most one of Value/Wrong is reachable
  SemanticsDef sem = lam_semantics();
  for (const char* s : {"succ (succ 0)", "0 0", "(fun x . x) (fun y . y)", "succ (fun x . x)"}) {
    CAPTURE(s);
    WrongAllOutcomes all = eval_wrong_all(sem, cfg(s), 500);
    CHECK((all.values.empty() || !all.any_wrong()));
  }
}
