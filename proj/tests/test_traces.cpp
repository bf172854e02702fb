// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/evaluator.hpp"
#include "bsw/lambda/ast.hpp"
#include "bsw/lambda/semantics.hpp"
#include "bsw/traces.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::lam;

namespace {

Config cfg(const std::string& s) { return to_config(parse_expr(s)); }

Trace trace_of(std::initializer_list<const char*> cs) {
  Trace t;
  for (const char* s : cs) t.push_back(cfg(s));
  return t;
}

const char* kOmega = "(fun x . x x) (fun x . x x)";
const char* kSmallOmega = "fun x . x x";

}  // namespace

TEST_CASE("finite_trace flattens derivations in visiting order") {
  Evaluator ev(lam_semantics());

  SUBCASE("a value contributes its one-element trace") {
    auto t = ev.prove_one(cfg("7"), 1);
    CHECK(finite_trace(*t) == trace_of({"7"}));
  }

  SUBCASE("successor visits the operand and the numeral") {
    auto t = ev.prove_one(cfg("succ 0"), 5);
    CHECK(finite_trace(*t) == trace_of({"succ 0", "0", "1"}));
  }

  SUBCASE("application visits function, argument, continuation") {
    auto t = ev.prove_one(cfg("(fun x . x) 3"), 10);
    CHECK(finite_trace(*t) == trace_of({"(fun x . x) 3", "fun x . x", "3", "3"}));
  }
}

TEST_CASE("every finite trace of a derivation ends in its result") {
  Evaluator ev(lam_semantics());
  for (const char* s : {"1 (+) 2", "(fun x . succ x) (1 (+) 2)", "succ (succ 0)"}) {
    Config c = cfg(s);
    for (const Result& r : ev.eval_all(c, 20)) {
      auto t = ev.prove_judgment(c, r, 20);
      REQUIRE(t.has_value());
      Trace tr = finite_trace(*t);
      REQUIRE(!tr.empty());
      CHECK(tr.front() == c);
      CHECK(tr.back() == r.cfg);
    }
  }
}

TEST_CASE("trace_prefix starts at the configuration and grows with steps") {
  SemanticsDef sem = lam_semantics();
  CHECK(trace_prefix(init_tree(sem, cfg("0 0"))) == trace_of({"0 0"}));

  // prefix-or-equal along any reduction sequence
  TreePtr t = init_tree(sem, cfg("(fun x . succ x) (1 (+) 2)"));
  Trace prev = trace_prefix(t);
  while (true) {
    auto opts = step_options(sem, t);
    if (opts.empty()) break;
    t = apply_option(sem, t, opts[0]);
    Trace cur = trace_prefix(t);
    REQUIRE(prev.size() <= cur.size());
    CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));
    prev = cur;
  }
}

TEST_CASE("trace_prefix of a complete tree equals finite_trace") {
  SemanticsDef sem = lam_semantics();
  Evaluator ev(sem);
  RunOutcome out = run(sem, cfg("succ 0"), 100, Strategy::first());
  REQUIRE(out.kind == RunOutcome::Kind::Converged);
  CHECK(trace_prefix(out.tree) == finite_trace(*ev.prove_one(cfg("succ 0"), 10)));
}

TEST_CASE("the Omega prefix repeats the three-element cycle") {
  SemanticsDef sem = lam_semantics();
  RunOutcome out = run(sem, cfg(kOmega), 320, Strategy::first());
  REQUIRE(out.kind == RunOutcome::Kind::Exhausted);
  Trace tr = trace_prefix(out.tree);
  REQUIRE(tr.size() >= 9);
  Trace cycle = trace_of({kOmega, kSmallOmega, kSmallOmega});
  for (size_t i = 0; i + 1 < tr.size(); ++i) CHECK(tr[i] == cycle[i % 3]);
}

TEST_CASE("the Omega witness verifies with the expected periodic trace") {
  SemanticsDef sem = lam_semantics();
  DivergenceWitness w;
  w.members[cfg(kOmega)] = {"app", 3};
  WitnessVerdict v = verify_divergence_witness(sem, w, 20);
  REQUIRE(v.valid);
  const PeriodicTrace& pt = v.traces.at(cfg(kOmega));
  CHECK(pt.prefix.empty());
  CHECK(pt.cycle == trace_of({kOmega, kSmallOmega, kSmallOmega}));

  // unrolling matches an actual PEV run prefix
  RunOutcome out = run(sem, cfg(kOmega), 320, Strategy::first());
  Trace tr = trace_prefix(out.tree);
  Trace unrolled = pt.unroll(tr.size() - 1);
  for (size_t i = 0; i + 1 < tr.size(); ++i) CHECK(tr[i] == unrolled[i]);
}

TEST_CASE("witness hypotheses are replayed and rejected") {
  SemanticsDef sem = lam_semantics();

  SUBCASE("a convergent premise configuration is not a member") {
    DivergenceWitness w;
    w.members[cfg("succ 0")] = {"succ", 2};
    WitnessVerdict v = verify_divergence_witness(sem, w, 20);
    CHECK_FALSE(v.valid);
    CHECK(v.reason.find("1 is not in the witness set") != std::string::npos);
    CHECK_FALSE(v.depth_limited);
  }

  SUBCASE("the wrong index points at a non-member result") {
    DivergenceWitness w;
    w.members[cfg(kOmega)] = {"app", 1};
    WitnessVerdict v = verify_divergence_witness(sem, w, 20);
    CHECK_FALSE(v.valid);
    CHECK(v.reason.find("not in the witness set") != std::string::npos);
  }

  SUBCASE("an unknown schedule selector is reported") {
    DivergenceWitness w;
    w.members[cfg(kOmega)] = {"frobnicate", 3};
    WitnessVerdict v = verify_divergence_witness(sem, w, 20);
    CHECK_FALSE(v.valid);
    CHECK(v.reason.find("no schedule") != std::string::npos);
  }

  SUBCASE("an underivable earlier premise is depth-limited") {
    DivergenceWitness w;
    // app schedule of (Omega Omega)-style term: premise 1 itself diverges
    w.members[cfg("(0 0) (fun x . x x) ")] = {"app", 2};
    WitnessVerdict v = verify_divergence_witness(sem, w, 15);
    CHECK_FALSE(v.valid);
    CHECK(v.depth_limited);
  }
}

TEST_CASE("a two-member witness solves into mutual cycles") {
  SemanticsDef sem = lam_semantics();
  // succ Omega diverges through Omega; Omega loops back to itself
  DivergenceWitness w;
  w.members[cfg("succ ((fun x . x x) (fun x . x x))")] = {"succ", 1};
  w.members[cfg(kOmega)] = {"app", 3};
  WitnessVerdict v = verify_divergence_witness(sem, w, 20);
  REQUIRE(v.valid);
  const PeriodicTrace& pt = v.traces.at(cfg("succ ((fun x . x x) (fun x . x x))"));
  CHECK(pt.prefix == trace_of({"succ ((fun x . x x) (fun x . x x))"}));
  CHECK(pt.cycle == trace_of({kOmega, kSmallOmega, kSmallOmega}));
}

TEST_CASE("witness files round-trip through JSON") {
  SemanticsDef sem = lam_semantics();
  DivergenceWitness w;
  w.members[cfg(kOmega)] = {"app", 3};
  std::string js = witness_to_json(w);
  DivergenceWitness w2 =
      parse_witness_json(js, [](const std::string& s) { return to_config(parse_expr(s)); });
  REQUIRE(w2.members.size() == 1);
  CHECK(w2.members.begin()->first == cfg(kOmega));
  CHECK(w2.members.begin()->second.rule_id == "app");
  CHECK(w2.members.begin()->second.index == 3);
  CHECK_THROWS(parse_witness_json("{\"nope\": 1}",
                                  [](const std::string& s) { return to_config(parse_expr(s)); }));
}
