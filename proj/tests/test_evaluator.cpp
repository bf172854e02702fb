// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "bsw/evaluator.hpp"
#include "bsw/lambda/ast.hpp"
#include "bsw/lambda/semantics.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::lam;

namespace {

Config cfg(const std::string& s) { return to_config(parse_expr(s)); }
Result res(const std::string& s) { return Result{cfg(s)}; }

std::set<Result> results_of(const std::string& term, int depth) {
  return eval_all(lam_semantics(), cfg(term), depth);
}

const char* kOmega = "(fun x . x x) (fun x . x x)";

}  // namespace

TEST_CASE("eval_all explores every nondeterministic branch") {
  CHECK(results_of("1 (+) 2", 10) == std::set<Result>{res("1"), res("2")});
  CHECK(results_of("(fun x . succ x) 2", 10) == std::set<Result>{res("3")});
  CHECK(results_of("(fun x . succ x) (1 (+) 2)", 10) == std::set<Result>{res("2"), res("3")});
}

TEST_CASE("values evaluate to themselves") {
  CHECK(results_of("7", 1) == std::set<Result>{res("7")});
  CHECK(results_of("fun x . x", 3) == std::set<Result>{res("fun x . x")});
}

TEST_CASE("divergent and stuck terms derive nothing") {
  CHECK(results_of(kOmega, 50).empty());
  CHECK(results_of("0 0", 20).empty());
  CHECK(results_of("succ (fun x . x)", 20).empty());
}

TEST_CASE("eval_all is monotone in depth") {
  Evaluator ev(lam_semantics());
  for (const char* s :
       {"1 (+) 2", "(fun x . succ x) 2", kOmega, "succ (1 (+) (2 (+) 0))", "(fun x . x x) (fun y . y)"}) {
    Config c = cfg(s);
    for (int d = 1; d < 12; ++d) {
      std::set<Result> lo = ev.eval_all(c, d);
      std::set<Result> hi = ev.eval_all(c, d + 1);
      for (const Result& r : lo) CHECK(hi.count(r) == 1);
    }
  }
}

TEST_CASE("prove_one materializes canonical derivations") {
  Evaluator ev(lam_semantics());

  SUBCASE("succ 0 has the two-premise shape") {
    auto t = ev.prove_one(cfg("succ 0"), 5);
    REQUIRE(t.has_value());
    CHECK(t->root == Judgment{cfg("succ 0"), res("1")});
    REQUIRE(t->children.size() == 2);
    CHECK(t->children[0].root == Judgment{cfg("0"), res("0")});
    CHECK(t->children[1].root == Judgment{cfg("1"), res("1")});
    CHECK(t->children[0].is_axiom());
    CHECK(t->children[1].is_axiom());
  }

  SUBCASE("a value proves by its axiom") {
    auto t = ev.prove_one(cfg("7"), 1);
    REQUIRE(t.has_value());
    CHECK(t->is_axiom());
    CHECK(t->root == Judgment{cfg("7"), res("7")});
  }

  SUBCASE("identity application yields the three-child app tree") {
    auto t = ev.prove_one(cfg("(fun x . x) 3"), 10);
    REQUIRE(t.has_value());
    CHECK(t->root == Judgment{cfg("(fun x . x) 3"), res("3")});
    REQUIRE(t->children.size() == 3);
    CHECK(t->children[0].root == Judgment{cfg("fun x . x"), res("fun x . x")});
    CHECK(t->children[1].root == Judgment{cfg("3"), res("3")});
    CHECK(t->children[2].root == Judgment{cfg("3"), res("3")});
  }

  SUBCASE("absent when nothing is derivable") {
    CHECK_FALSE(ev.prove_one(cfg(kOmega), 30).has_value());
    CHECK_FALSE(ev.prove_one(cfg("0 0"), 10).has_value());
  }
}

TEST_CASE("prove_judgment pins the requested result") {
  Evaluator ev(lam_semantics());
  auto t = ev.prove_judgment(cfg("1 (+) 2"), res("2"), 10);
  REQUIRE(t.has_value());
  CHECK(t->root == Judgment{cfg("1 (+) 2"), res("2")});
  CHECK_FALSE(ev.prove_judgment(cfg("1 (+) 2"), res("3"), 10).has_value());
}

TEST_CASE("every proved result is in eval_all and vice versa") {
  Evaluator ev(lam_semantics());
  for (const char* s : {"1 (+) 2", "(fun x . x) (0 (+) succ 1)", "succ (0 (+) 1)"}) {
    Config c = cfg(s);
    for (const Result& r : ev.eval_all(c, 12)) {
      auto t = ev.prove_judgment(c, r, 12);
      REQUIRE(t.has_value());
      CHECK(t->root.result == r);
    }
  }
}

TEST_CASE("arithmetic extension evaluates prefix plus") {
  SemanticsDef sem = lam_arith_semantics();
  CHECK(eval_all(sem, cfg("+ 1 2"), 10) == std::set<Result>{res("3")});
  CHECK(eval_all(sem, cfg("+ (1 (+) 2) (1 (+) 2)"), 10) ==
        std::set<Result>{res("2"), res("3"), res("4")});
  // without the extension the construct is stuck
  CHECK(eval_all(lam_semantics(), cfg("+ 1 2"), 10).empty());
}
