// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include <vector>

#include "bsw/evaluator.hpp"
#include "bsw/lambda/ast.hpp"
#include "bsw/lambda/semantics.hpp"
#include "bsw/pev.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::lam;

namespace {

Config cfg(const std::string& s) { return to_config(parse_expr(s)); }
Result res(const std::string& s) { return Result{cfg(s)}; }

const char* kOmega = "(fun x . x x) (fun x . x x)";

// Checks the structural invariants and the strict growth of every step.
struct CheckingObserver : RunObserver {
  long steps = 0;
  void on_step(const TreePtr& before, const StepEvent&, const TreePtr& after) override {
    ++steps;
    CHECK(tree_leq(before, after));
    CHECK_FALSE(tree_leq(after, before));
    auto violation = tree_invariant_violation(after);
    if (violation) FAIL_CHECK(*violation);
  }
};

}  // namespace

TEST_CASE("init_tree builds the Unknown leaf") {
  SemanticsDef sem = lam_semantics();
  for (const char* s : {"(fun x . x) 3", "7", kOmega}) {
    TreePtr t = init_tree(sem, cfg(s));
    CHECK(t->config == cfg(s));
    CHECK(t->unknown());
    CHECK(t->children.empty());
    CHECK_FALSE(is_complete(t));
  }
}

TEST_CASE("a result leaf steps by the axiom once") {
  SemanticsDef sem = lam_semantics();
  TreePtr t = init_tree(sem, cfg("3"));
  auto opts = step_options(sem, t);
  REQUIRE(opts.size() == 1);
  CHECK(opts[0].schema == StepOption::Schema::Axiom);
  TreePtr t2 = apply_option(sem, t, opts[0]);
  CHECK(is_complete(t2));
  CHECK(*t2->outcome == res("3"));
  CHECK(step_options(sem, t2).empty());
}

TEST_CASE("identity application converges in the golden seven steps") {
  SemanticsDef sem = lam_semantics();
  RunOptions ro;
  ro.log_events = true;
  CheckingObserver obs;
  ro.observer = &obs;
  RunOutcome out = run(sem, cfg("(fun x . x) 3"), 100, Strategy::first(), ro);
  REQUIRE(out.kind == RunOutcome::Kind::Converged);
  CHECK(*out.result == res("3"));
  CHECK(out.steps == 7);
  REQUIRE(out.events.size() == 7);
  const char* expected[] = {"open-first", "axiom", "open-next", "axiom",
                            "open-next",  "axiom", "conclude"};
  for (int i = 0; i < 7; ++i) CHECK(out.events[i].schema == expected[i]);
  CHECK(is_complete(out.tree));
  CHECK(obs.steps == 7);

  // the final tree is the complete app derivation
  REQUIRE(out.tree->children.size() == 3);
  CHECK(out.tree->children[0]->config == cfg("fun x . x"));
  CHECK(out.tree->children[1]->config == cfg("3"));
  CHECK(out.tree->children[2]->config == cfg("3"));
}

TEST_CASE("feeding a rejected result leaves the tree stuck") {
  SemanticsDef sem = lam_semantics();
  RunOutcome out = run(sem, cfg("0 0"), 100, Strategy::first());
  REQUIRE(out.kind == RunOutcome::Kind::Stuck);
  CHECK(out.steps == 2);  // open the first premise, fire its axiom
  CHECK(out.tree->unknown());
  CHECK(step_options(sem, out.tree).empty());
}

TEST_CASE("divergence exhausts the fuel") {
  SemanticsDef sem = lam_semantics();
  RunOutcome out = run(sem, cfg(kOmega), 10000, Strategy::first());
  CHECK(out.kind == RunOutcome::Kind::Exhausted);
  CHECK(out.steps == 10000);
  CHECK_FALSE(step_options(sem, out.tree).empty());
}

TEST_CASE("wrong-successor runs get stuck") {
  SemanticsDef sem = lam_semantics();
  RunOutcome out = run(sem, cfg("succ (fun x . x)"), 100, Strategy::first());
  CHECK(out.kind == RunOutcome::Kind::Stuck);
}

TEST_CASE("tree_leq is the growth order of the reduction") {
  SemanticsDef sem = lam_semantics();
  TreePtr t = init_tree(sem, cfg("(fun x . x) 3"));
  std::vector<TreePtr> sequence{t};
  while (true) {
    auto opts = step_options(sem, t);
    if (opts.empty()) break;
    t = apply_option(sem, t, opts[0]);
    sequence.push_back(t);
  }
  REQUIRE(sequence.size() == 8);
  for (size_t i = 0; i + 1 < sequence.size(); ++i) {
    CHECK(tree_leq(sequence[i], sequence[i + 1]));
    CHECK_FALSE(tree_leq(sequence[i + 1], sequence[i]));
  }
  for (const TreePtr& x : sequence) CHECK(tree_leq(x, x));
  CHECK_FALSE(tree_leq(sequence.back(), sequence.front()));
}

TEST_CASE("choice branches explore under strategy All") {
  SemanticsDef sem = lam_semantics();
  AllOutcomes all = run_all(sem, cfg("1 (+) 2"), 100, 64);
  CHECK(all.converged_results() == std::set<Result>{res("1"), res("2")});
  CHECK_FALSE(all.any_stuck());
  CHECK_FALSE(all.any_exhausted());

  AllOutcomes mix = run_all(sem, cfg("(succ (fun x . x)) (+) 5"), 100, 64);
  CHECK(mix.converged_results() == std::set<Result>{res("5")});
  CHECK(mix.any_stuck());
}

TEST_CASE("run_all agrees with the reference evaluator on a small corpus") {
  SemanticsDef sem = lam_semantics();
  Evaluator ev(sem);
  CheckingObserver obs;
  RunOptions ro;
  ro.observer = &obs;
  for (const char* s :
       {"(fun x . x) 3", "1 (+) 2", "succ 0", "0 0", kOmega, "succ (fun x . x)",
        "(fun x . succ x) (1 (+) 2)", "(fun x . x x) (fun y . y)", "succ (0 0)",
        "(0 0) (+) 1", "fun z . 0 0"}) {
    CAPTURE(s);
    AllOutcomes all = run_all(sem, cfg(s), 500, 1024, ro);
    CHECK(all.converged_results() == ev.eval_all(cfg(s), 50));
  }
}

TEST_CASE("root result implies a complete tree on reachable states") {
  SemanticsDef sem = lam_semantics();
  for (const char* s : {"(fun x . succ x) (1 (+) 2)", "succ (succ 0)"}) {
    TreePtr t = init_tree(sem, cfg(s));
    while (true) {
      auto opts = step_options(sem, t);
      if (opts.empty()) break;
      t = apply_option(sem, t, opts[0]);
      if (!t->unknown()) CHECK(is_complete(t));
    }
  }
}

TEST_CASE("single steps apply one schema under the strategy") {
  SemanticsDef sem = lam_semantics();
  TreePtr t = init_tree(sem, cfg("succ 0"));
  auto s1 = step(sem, t, Strategy::first());
  REQUIRE(s1.has_value());
  CHECK(s1->event.schema == "open-first");
  auto s2 = step(sem, s1->next, Strategy::first());
  REQUIRE(s2.has_value());
  CHECK(s2->event.schema == "axiom");
  CHECK(tree_leq(s1->next, s2->next));
  // a completed tree is irreducible
  RunOutcome done = run(sem, cfg("succ 0"), 100, Strategy::first());
  CHECK_FALSE(step(sem, done.tree, Strategy::first()).has_value());
  // the choice point is picked reproducibly under a seeded random strategy
  TreePtr ch = init_tree(sem, cfg("1 (+) 2"));
  auto a = step(sem, ch, Strategy::random(9));
  auto b = step(sem, ch, Strategy::random(9));
  REQUIRE((a && b));
  CHECK(tree_identical(a->next, b->next));
}

TEST_CASE("random strategy is reproducible") {
  SemanticsDef sem = lam_semantics();
  Config c = cfg("(1 (+) 2) (+) (3 (+) 4)");
  RunOutcome a = run(sem, c, 100, Strategy::random(42));
  RunOutcome b = run(sem, c, 100, Strategy::random(42));
  REQUIRE(a.kind == RunOutcome::Kind::Converged);
  CHECK(*a.result == *b.result);
  CHECK(a.steps == b.steps);
}
