// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/enumerate.hpp"
#include "bsw/evaluator.hpp"
#include "bsw/fj/presets.hpp"
#include "bsw/fj/types.hpp"
#include "bsw/pev.hpp"
#include "bsw/soundness.hpp"
#include "bsw/wrong.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::fj;

namespace {

TablePtr fjl_table() {
  static TablePtr t = load_table_ptr(presets::fjl_table(), Flavor::FjLambda);
  return t;
}
TablePtr fjo_table() {
  static TablePtr t = load_table_ptr(presets::fjo_table(), Flavor::FjUnion);
  return t;
}
TablePtr fji_table() {
  static TablePtr t = load_table_ptr(presets::fji_table(), Flavor::FjImperative);
  return t;
}

Config fjl_cfg(const std::string& src) { return env_config({}, parse_fj_expr(src)); }
Config fjo_cfg(const std::string& src) { return plain_config(parse_fj_expr(src)); }
Config fji_cfg(const std::string& src) { return mem_config({}, parse_fj_expr(src)); }

const char* kEqArg = "if false then new C(new P()) else new D(new Q())";

}  // namespace

TEST_CASE("fj expression parsing and printing round-trip") {
  for (const char* s :
       {"new C()", "new C(new A(), x)", "x.f", "new C().m(y)", "(x) -> x",
        "(x, y) -> x.m(y)", "<I> (x) -> x", "if x.f then new C() else new D()",
        "x.f = new A()", "@3", "object C((x) -> x)", "new B(new A()).get(new A2())",
        "x.f.g", "x.m().n(a, b)"}) {
    CAPTURE(s);
    CHECK(print_expr(parse_fj_expr(s)) == s);
  }
  CHECK_THROWS_AS(parse_fj_expr("new C( "), ParseError);
  CHECK_THROWS_AS(parse_fj_expr("x. "), ParseError);
  CHECK_THROWS_AS(parse_fj_expr("(x) -> (y) -> x"), ParseError);
  CHECK_THROWS_AS(parse_fj_expr("x = y"), ParseError);
}

TEST_CASE("class tables load and reject ill-formed declarations") {
  CHECK_NOTHROW(load_class_table(presets::fjl_table(), Flavor::FjLambda));
  CHECK_NOTHROW(load_class_table(presets::fjo_table(), Flavor::FjUnion));
  CHECK_NOTHROW(load_class_table(presets::fji_table(), Flavor::FjImperative));

  SUBCASE("overriding must keep the method type") {
    const char* bad = R"(
class A { }
class B { A m(A x) { return x; } }
class C extends B { C m(A x) { return new C(); } }
)";
    CHECK_THROWS_WITH_AS(load_class_table(bad, Flavor::FjLambda),
                         doctest::Contains("override keeps the method type"), TableError);
  }
  SUBCASE("field hiding is rejected") {
    const char* bad = R"(
class A { }
class B { A f; }
class C extends B { A f; }
)";
    CHECK_THROWS_WITH_AS(load_class_table(bad, Flavor::FjLambda),
                         doctest::Contains("no field hiding"), TableError);
  }
  SUBCASE("method bodies must typecheck") {
    const char* bad = R"(
class A { }
class B { A m() { return new B(); } }
)";
    CHECK_THROWS_WITH_AS(load_class_table(bad, Flavor::FjLambda),
                         doctest::Contains("method bodies typecheck"), TableError);
  }
  SUBCASE("interface methods must be implemented") {
    const char* bad = R"(
class A { }
interface I { A m(A x); }
class B implements I { }
)";
    CHECK_THROWS_WITH_AS(load_class_table(bad, Flavor::FjLambda),
                         doctest::Contains("interface method implemented"), TableError);
  }
  SUBCASE("intersection method types are MiniFJ&O only") {
    const char* bad = R"(
class A { }
class B { A m(A x) & A m(B x) { return new A(); } }
)";
    CHECK_THROWS_AS(load_class_table(bad, Flavor::FjLambda), TableError);
  }
}

TEST_CASE("MiniFJ&lambda: casts make lambdas storable") {
  TablePtr ct = fjl_table();
  SemanticsDef sem = fjl_semantics(ct);

  SUBCASE("the cast-protected lambda evaluates into the object") {
    Evaluator ev(sem);
    auto results = ev.eval_all(fjl_cfg("new C(<I> (x) -> x)"), 20);
    REQUIRE(results.size() == 1);
    CHECK(results.begin()->text() == "object C((x) -> x)");
  }

  SUBCASE("typing accepts the cast and rejects the bare and mistargeted lambdas") {
    CHECK(typecheck_fjl(*ct, {}, parse_fj_expr("new C(<I> (x) -> x)")) ==
          std::optional<std::string>("C"));
    CHECK_FALSE(typecheck_fjl(*ct, {}, parse_fj_expr("new C((x) -> x)")).has_value());
    // lambda at the non-functional target J
    CHECK_FALSE(
        typecheck_fjl(*ct, {}, parse_fj_expr("new C(<I> (x) -> x).n((x) -> x)")).has_value());
    // and the arity-violating constructor call
    CHECK_FALSE(typecheck_fjl(*ct, {}, parse_fj_expr("new C().n((x) -> x)")).has_value());
    // passing the I-typed parameter to the J-expecting method is fine
    CHECK(typecheck_fjl(*ct, {}, parse_fj_expr("new C(<I> (x) -> x).m(<I> (x) -> x)")) ==
          std::optional<std::string>("C"));
  }

  SUBCASE("the predicate sees configurations and results") {
    IndexedPredicate P = fjl_predicate(ct);
    auto tix = [](const std::string& t) {
      return PredicateIndex::make<std::string>(std::make_shared<std::string>(t), t);
    };
    CHECK(P.holds(tix("C"), fjl_cfg("new C(<I> (x) -> x)")));
    CHECK(P.holds(tix("C"), plain_config(parse_fj_expr("object C((x) -> x)"))));
    CHECK(P.holds(tix("J"), plain_config(parse_fj_expr("(x) -> x"))));  // via I <= J
    CHECK_FALSE(P.holds(tix("C"), fjl_cfg("new C((x) -> x)")));
  }
}

TEST_CASE("MiniFJ&lambda: invocation branches share the receiver premise") {
  TablePtr ct = fjl_table();
  SemanticsDef sem = fjl_semantics(ct);
  Config call = fjl_cfg("new C(<I> (x) -> x).m(<I> (x) -> x)");
  auto states = sem.open_rules(call);
  REQUIRE(states.size() == 2);
  CHECK(states[0].rule_id() == "invk");
  CHECK(states[1].rule_id() == "lambda-invk");
  CHECK(states[0].current() == states[1].current());

  // materialize both branches of e0.m(es) on a method-less receiver position
  Result obj{plain_config(parse_fj_expr("object C((x) -> x)"))};
  Result lam{plain_config(parse_fj_expr("(x) -> x"))};
  CHECK(feed(states[0], obj).continued());
  CHECK(feed(states[0], lam).rejected());
  CHECK(feed(states[1], lam).continued());
  CHECK(feed(states[1], obj).rejected());

  // the instances agree up to the first premise (the sim_upto class)
  RuleInstance a{states[0].rule_id(), call, {Judgment{states[0].current(), obj}}};
  RuleInstance b{states[1].rule_id(), call, {Judgment{states[1].current(), lam}}};
  CHECK(sim_upto(a, b, 1));

  // evaluating the call runs the object's method
  Evaluator ev(sem);
  auto results = ev.eval_all(call, 30);
  REQUIRE(results.size() == 1);
  CHECK(results.begin()->text() == "object C((x) -> x)");

  // a lambda receiver routes through lambda-invk: the method name is ignored
  auto lam_call = ev.eval_all(fjl_cfg("(<I> (x) -> x).m(new A())"), 30);
  REQUIRE(lam_call.size() == 1);
  CHECK(lam_call.begin()->text() == "object A()");
}

TEST_CASE("MiniFJ&lambda: variables resolve through the environment") {
  TablePtr ct = fjl_table();
  SemanticsDef sem = fjl_semantics(ct);
  std::map<std::string, ExprPtr> env{{"x", parse_fj_expr("object A()")}};
  Config c = env_config(env, parse_fj_expr("x"));
  Evaluator ev(sem);
  auto results = ev.eval_all(c, 10);
  REQUIRE(results.size() == 1);
  CHECK(results.begin()->text() == "object A()");

  // unbound variables are stuck, with no rule to conclude them
  Config unbound = env_config({}, parse_fj_expr("y"));
  CHECK(sem.open_rules(unbound).empty());
  WrongOutcome w = eval_wrong(sem, unbound, 50, Strategy::first());
  REQUIRE(w.is_wrong());
  CHECK(w.evidence->kind == WrongEvidence::Kind::NoRule);
}

TEST_CASE("MiniFJ&O: the intersection-typed equality accepts the union argument") {
  TablePtr ct = fjo_table();
  SemanticsDef sem = fjo_semantics(ct);
  std::string call = std::string("new E().eq(") + kEqArg + ", " + kEqArg + ")";

  SUBCASE("the argument types at the union of its branch classes") {
    CHECK(typecheck_fjo(*ct, {}, parse_fj_expr(kEqArg), FjoType::unions({"C", "D"}), 8));
    CHECK_FALSE(typecheck_fjo(*ct, {}, parse_fj_expr(kEqArg), FjoType::single("C"), 8));
  }

  SUBCASE("eq(e, e) types at bool and never gets stuck") {
    CHECK(typecheck_fjo(*ct, {}, parse_fj_expr(call), FjoType::boolean(), 8));
    AllClassifier pc(sem);
    AllSummary sum = pc.classify(fjo_cfg(call), 2000);
    CHECK_FALSE(sum.stuck);
    CHECK_FALSE(sum.exhausted);
    REQUIRE(sum.results.size() == 1);
    CHECK(sum.results.begin()->text() == "true");
  }

  SUBCASE("a single duplicated-union argument does not fit any component") {
    std::string mixed = std::string("new E().eq(new C(new P()), ") + kEqArg + ")";
    CHECK_FALSE(typecheck_fjo(*ct, {}, parse_fj_expr(mixed), FjoType::boolean(), 8));
  }

  SUBCASE("the key property: a union-typed value fits one branch") {
    Evaluator ev(sem);
    for (const Result& r : ev.eval_all(fjo_cfg(kEqArg), 20)) {
      const ExprPtr v = fj_of(r.cfg).expr;
      bool c = typecheck_fjo(*ct, {}, v, FjoType::single("C"), 8);
      bool d = typecheck_fjo(*ct, {}, v, FjoType::single("D"), 8);
      CHECK((c || d));
    }
  }
}

TEST_CASE("imperative FJ: memory threading, allocation and update") {
  TablePtr ct = fji_table();
  SemanticsDef sem = fji_semantics(ct);
  Evaluator ev(sem);

  SUBCASE("allocation is deterministic and sequential") {
    Config c = fji_cfg("new B(new A())");
    auto r1 = ev.eval_all(c, 20);
    auto r2 = eval_all(sem, c, 20);
    REQUIRE(r1.size() == 1);
    CHECK(r1 == r2);
    CHECK(r1.begin()->text() == "<@0=new A(); @1=new B(@0) | @1>");
  }

  SUBCASE("field assignment updates the object state and returns the id") {
    Config c = fji_cfg("new B(new A()).f = new A2()");
    auto rs = ev.eval_all(c, 30);
    REQUIRE(rs.size() == 1);
    CHECK(rs.begin()->text() == "<@0=new A(); @1=new B(@2); @2=new A2() | @2>");
  }

  SUBCASE("method calls substitute ids and thread the final memory") {
    Config c = fji_cfg("new B(new A()).get(new A2())");
    auto rs = ev.eval_all(c, 40);
    REQUIRE(rs.size() == 1);
    CHECK(rs.begin()->text() == "<@0=new A(); @1=new B(@2); @2=new A2() | @2>");
  }

  SUBCASE("memories only grow along premise order") {
    SemanticsDef s2 = sem;
    Config c = fji_cfg("new B(new B(new A()).get(new A2()))");
    RunOutcome out = run(s2, c, 400, Strategy::first());
    REQUIRE(out.kind == RunOutcome::Kind::Converged);
    // every judgment along the final tree has the child memory containing the parent's
    std::function<void(const TreePtr&)> walk = [&](const TreePtr& t) {
      const FjConfig& parent = fj_of(t->config);
      for (const TreePtr& ch : t->children) {
        if (parent.kind == FjConfig::Kind::MemExpr) {
          const FjConfig& child = fj_of(ch->config);
          if (child.kind == FjConfig::Kind::MemExpr)
            for (const auto& [id, state] : parent.memory) {
              CHECK(child.memory.count(id) == 1);
              (void)state;
            }
        }
        walk(ch);
      }
    };
    walk(out.tree);
  }
}

TEST_CASE("imperative FJ typing and the memory-indexed predicate") {
  TablePtr ct = fji_table();
  SemanticsDef sem = fji_semantics(ct);

  SUBCASE("expressions type algorithmically") {
    CHECK(typecheck_fji(*ct, {}, {}, parse_fj_expr("new B(new A()).get(new A2())")) ==
          std::optional<std::string>("A"));
    CHECK(typecheck_fji(*ct, {}, {}, parse_fj_expr("new B(new A2()).f = new A()")) ==
          std::optional<std::string>("A"));
    CHECK_FALSE(typecheck_fji(*ct, {}, {}, parse_fj_expr("new B(new B(new A())).peek()"))
                    .has_value());
    CHECK_FALSE(typecheck_fji(*ct, {}, {}, parse_fj_expr("new A().peek()")).has_value());
  }

  SUBCASE("results hold at their class and supertypes") {
    IndexedPredicate P = fji_predicate(ct);
    Evaluator ev(sem);
    Config c = fji_cfg("new B(new A()).get(new A2())");
    auto rs = ev.eval_all(c, 30);
    REQUIRE(rs.size() == 1);
    bool holds_a = false;
    for (const PredicateIndex& i : P.index_universe(rs.begin()->cfg))
      if (P.holds(i, rs.begin()->cfg) && i.text().find(";A") != std::string::npos)
        holds_a = true;
    CHECK(holds_a);
  }

  SUBCASE("the predicate rejects ill-typed and accepts well-typed configurations") {
    IndexedPredicate P = fji_predicate(ct);
    Config good = fji_cfg("new B(new A())");
    Config bad = fji_cfg("new A().peek()");
    bool good_some = false, bad_some = false;
    for (const PredicateIndex& i : P.index_universe(good)) good_some |= P.holds(i, good);
    for (const PredicateIndex& i : P.index_universe(bad)) bad_some |= P.holds(i, bad);
    CHECK(good_some);
    CHECK_FALSE(bad_some);
  }
}

TEST_CASE("fj corpora: generation, typing filter and a soundness smoke run") {
  GenSpec g;
  g.max_size = 3;

  SUBCASE("MiniFJ&lambda") {
    TablePtr ct = fjl_table();
    auto terms = gen_fj_terms(g, *ct);
    REQUIRE(terms.size() > 10);
    IndexedPredicate P = fjl_predicate(ct);
    auto corpus = gen_welltyped(terms, P, 2);
    REQUIRE(!corpus.empty());
    SemanticsDef sem = fjl_semantics(ct);
    Bounds b;
    b.eval_depth = 24;
    b.fuel = 600;
    b.instance_count = 24;
    Report rep = run_suite(sem, P, corpus, fj_result_pool(*ct), b);
    CHECK(rep.conditions["S1"].fail == 0);
    CHECK(rep.conditions["S2"].fail == 0);
    CHECK(rep.conditions["S3"].fail == 0);
    CHECK(rep.conditions["S4"].fail == 0);
    CHECK(rep.conditions["pev-stuck-free"].fail == 0);
    CHECK(rep.conditions["wrong-free"].fail == 0);
  }

  SUBCASE("MiniFJ&O") {
    TablePtr ct = fjo_table();
    auto terms = gen_fj_terms(g, *ct);
    IndexedPredicate P = fjo_predicate(ct);
    auto corpus = gen_welltyped(terms, P, 2);
    REQUIRE(!corpus.empty());
    SemanticsDef sem = fjo_semantics(ct);
    Bounds b;
    b.eval_depth = 24;
    b.fuel = 600;
    b.instance_count = 24;
    Report rep = run_suite(sem, P, corpus, fj_result_pool(*ct), b);
    CHECK(rep.conditions["S1"].fail == 0);
    CHECK(rep.conditions["S2"].fail == 0);
    CHECK(rep.conditions["S3"].fail == 0);
    CHECK(rep.conditions["pev-stuck-free"].fail == 0);
    CHECK(rep.conditions["wrong-free"].fail == 0);
  }

  SUBCASE("imperative FJ") {
    TablePtr ct = fji_table();
    auto terms = gen_fj_terms(g, *ct);
    IndexedPredicate P = fji_predicate(ct);
    auto corpus = gen_welltyped(terms, P, 2);
    REQUIRE(!corpus.empty());
    SemanticsDef sem = fji_semantics(ct);
    Bounds b;
    b.eval_depth = 24;
    b.fuel = 600;
    b.instance_count = 24;
    Report rep = run_suite(sem, P, corpus, fj_result_pool(*ct), b);
    CHECK(rep.conditions["S1"].fail == 0);
    CHECK(rep.conditions["S2"].fail == 0);
    CHECK(rep.conditions["S3"].fail == 0);
    CHECK(rep.conditions["pev-stuck-free"].fail == 0);
    CHECK(rep.conditions["wrong-free"].fail == 0);
  }
}
