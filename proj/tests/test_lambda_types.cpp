// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <set>

#include "bsw/lambda/semantics.hpp"
#include "bsw/lambda/types.hpp"
#include "doctest.h"

using namespace bsw;
using namespace bsw::lam;

namespace {

TypePtr ty(const std::string& s) { return parse_type(s); }
ExprPtr ex(const std::string& s) { return parse_expr(s); }

// Independent oracle for equi-recursive equality: compare the regular trees
// by plain structural unfolding down to a cut depth, with a test-local
// substitution so nothing is shared with the implementation under test.
TypePtr oracle_subst(const TypePtr& t, const std::string& name, const TypePtr& s) {
  switch (t->kind) {
    case Type::Kind::Var: return t->name == name ? s : t;
    case Type::Kind::Mu:
      return t->name == name ? t : t_mu(t->name, oracle_subst(t->body, name, s));
    case Type::Kind::Arrow:
      return t_arrow(oracle_subst(t->left, name, s), oracle_subst(t->right, name, s));
    default: return t;
  }
}

TypePtr oracle_head(TypePtr t) {
  while (t->kind == Type::Kind::Mu) t = oracle_subst(t->body, t->name, t);
  return t;
}

bool oracle_eq(const TypePtr& a, const TypePtr& b, int depth) {
  if (depth == 0) return true;  // cut: regular trees agree below this depth
  TypePtr ha = oracle_head(a);
  TypePtr hb = oracle_head(b);
  if (ha->kind != hb->kind) return false;
  switch (ha->kind) {
    case Type::Kind::Var: return ha->name == hb->name;
    case Type::Kind::Arrow:
      return oracle_eq(ha->left, hb->left, depth - 1) && oracle_eq(ha->right, hb->right, depth - 1);
    default: return true;
  }
}

int type_states(const TypePtr& t) {
  int n = 1;
  switch (t->kind) {
    case Type::Kind::Arrow:
    case Type::Kind::And:
    case Type::Kind::Or: n += type_states(t->left) + type_states(t->right); break;
    case Type::Kind::Mu: n += type_states(t->body); break;
    default: break;
  }
  return n;
}

}  // namespace

TEST_CASE("type parsing and printing round-trip") {
  for (const char* s : {"nat", "nat -> nat", "(nat -> nat) -> nat", "rec a . a -> nat",
                        "even & odd | nat", "even -> even -> even & odd -> odd -> even",
                        "rec a . (a -> nat) -> a"}) {
    CAPTURE(s);
    CHECK(print_type(parse_type(s)) == s);
  }
}

TEST_CASE("equi-recursive equality agrees with the unfolding oracle") {
  TypePtr mu_arrow_nat = ty("rec a . a -> nat");

  SUBCASE("one-step unfolding") {
    CHECK(type_equal(mu_arrow_nat, t_arrow(mu_arrow_nat, t_nat())));
    CHECK(type_equal(mu_arrow_nat, ty("(rec a . a -> nat) -> nat")));
  }
  SUBCASE("plainly different trees") {
    CHECK_FALSE(type_equal(ty("nat"), ty("nat -> nat")));
    CHECK_FALSE(type_equal(mu_arrow_nat, ty("nat")));
  }
  SUBCASE("alpha-renamed binders denote the same tree") {
    CHECK(type_equal(ty("rec a . a -> a"), ty("rec b . b -> b")));
  }
  SUBCASE("systematic agreement with the oracle") {
    std::vector<TypePtr> catalog = {
        ty("nat"),
        ty("nat -> nat"),
        ty("rec a . a -> nat"),
        ty("(rec a . a -> nat) -> nat"),
        ty("rec a . a -> a"),
        ty("rec b . b -> b"),
        ty("rec a . (a -> nat) -> nat"),
        ty("rec a . nat -> a"),
        ty("nat -> (rec a . nat -> a)"),
        ty("rec a . a -> a -> nat"),
    };
    for (const TypePtr& a : catalog) {
      for (const TypePtr& b : catalog) {
        CAPTURE(print_type(a));
        CAPTURE(print_type(b));
        int cut = 2 * (type_states(a) + type_states(b)) + 2;
        CHECK(type_equal(a, b) == oracle_eq(a, b, cut));
      }
    }
  }
  SUBCASE("non-contractive and union-carrying types are rejected") {
    CHECK_THROWS_AS(type_equal(t_mu("a", t_var("a")), ty("nat")), std::invalid_argument);
    CHECK_THROWS_AS(type_equal(ty("nat & nat"), ty("nat")), std::invalid_argument);
  }
}

TEST_CASE("simply-typed checking") {
  auto uni = simple_type_universe();
  auto check = [&](const std::string& e, const std::string& t) {
    return typecheck_simple({}, ex(e), ty(t), uni);
  };

  CHECK(check("fun x . x", "nat -> nat"));
  CHECK(check("3", "nat"));
  CHECK(check("succ 0", "nat"));
  CHECK(check("1 (+) 2", "nat"));
  CHECK(check("(fun x . x) 3", "nat"));
  CHECK_FALSE(check("fun x . x", "nat"));
  CHECK_FALSE(check("succ (fun x . x)", "nat"));
  CHECK_FALSE(check("0 0", "nat"));

  SUBCASE("self-application types through the recursive type") {
    // annotated route
    CHECK(typecheck_simple(
        {}, ex("(fun x : rec a . a -> nat . x x) (fun x : rec a . a -> nat . x x)"), ty("nat"),
        {}));
    // universe route, no annotations
    CHECK(check("(fun x . x x) (fun x . x x)", "nat"));
  }

  SUBCASE("succ of an abstraction is untypable at every universe type") {
    for (const TypePtr& t : uni) CHECK_FALSE(typecheck_simple({}, ex("succ (fun x . x)"), t, uni));
  }

  SUBCASE("canonical forms") {
    std::vector<ExprPtr> values = {ex("0"), ex("5"), ex("fun x . x"), ex("fun x . succ x"),
                                   ex("fun x . fun y . x")};
    for (const ExprPtr& v : values) {
      for (const TypePtr& t : uni) {
        if (!typecheck_simple({}, v, t, uni)) continue;
        if (type_equal(t, t_nat()))
          CHECK(v->kind == Expr::Kind::Const);
        else
          CHECK(v->kind == Expr::Kind::Abs);
      }
    }
  }

  SUBCASE("substitution lemma on generated instances") {
    std::vector<ExprPtr> bodies = {ex("x"),           ex("succ x"),       ex("x x"),
                                   ex("fun y . x"),   ex("x (+) 0"),      ex("fun y . y x"),
                                   ex("succ (x (+) 1)")};
    std::vector<ExprPtr> values = {ex("0"), ex("fun z . z"), ex("fun z . succ z")};
    int covered = 0;
    for (const ExprPtr& body : bodies) {
      for (const TypePtr& t1 : uni) {
        for (const TypePtr& t2 : uni) {
          TypeEnv env{{"x", t1}};
          if (!typecheck_simple(env, body, t2, uni)) continue;
          for (const ExprPtr& v : values) {
            if (!typecheck_simple({}, v, t1, uni)) continue;
            ++covered;
            CAPTURE(print_expr(body));
            CAPTURE(print_type(t1));
            CAPTURE(print_type(t2));
            CHECK(typecheck_simple({}, substitute(body, "x", v), t2, uni));
          }
        }
      }
    }
    CHECK(covered > 10);
  }
}

TEST_CASE("intersection/union subtyping matches the axiom-set saturation") {
  TypePtr A = ty("even");
  TypePtr B = ty("odd");
  CHECK(subtype_iu(t_and(A, B), A));
  CHECK(subtype_iu(A, t_or(A, B)));
  CHECK(subtype_iu(A, t_or(B, A)));
  CHECK_FALSE(subtype_iu(ty("nat"), ty("even")));
  CHECK_FALSE(subtype_iu(t_or(A, B), A));

  // Saturation oracle over a subterm-closed universe: seed the axiom
  // instances, close under transitivity, compare pairwise.
  std::vector<TypePtr> uni = {
      ty("nat"), ty("even"), ty("odd"), ty("even | odd"), ty("even & odd"),
      ty("(even & odd) & nat"), ty("nat | (even | odd)"), ty("nat -> even"),
      ty("(nat -> even) & nat"), ty("even | nat")};
  // subterm closure
  std::function<void(const TypePtr&)> add = [&](const TypePtr& t) {
    for (const TypePtr& u : uni)
      if (type_syntactic_eq(u, t)) return;
    uni.push_back(t);
    if (t->kind == Type::Kind::And || t->kind == Type::Kind::Or ||
        t->kind == Type::Kind::Arrow) {
      add(t->left);
      add(t->right);
    }
  };
  for (size_t i = 0; i < uni.size(); ++i) {
    TypePtr t = uni[i];
    if (t->kind == Type::Kind::And || t->kind == Type::Kind::Or || t->kind == Type::Kind::Arrow) {
      add(t->left);
      add(t->right);
    }
  }
  const size_t n = uni.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  auto find = [&](const TypePtr& t) -> int {
    for (size_t i = 0; i < n; ++i)
      if (type_syntactic_eq(uni[i], t)) return static_cast<int>(i);
    return -1;
  };
  for (size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (size_t i = 0; i < n; ++i) {
    const TypePtr& t = uni[i];
    if (t->kind == Type::Kind::And) {
      int l = find(t->left), r = find(t->right);
      if (l >= 0) leq[i][static_cast<size_t>(l)] = true;
      if (r >= 0) leq[i][static_cast<size_t>(r)] = true;
    }
    if (t->kind == Type::Kind::Or) {
      int l = find(t->left), r = find(t->right);
      if (l >= 0) leq[static_cast<size_t>(l)][i] = true;
      if (r >= 0) leq[static_cast<size_t>(r)][i] = true;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    // the conjunction-introduction closure rule
    for (size_t i = 0; i < n; ++i) {
      if (uni[i]->kind != Type::Kind::And) continue;
      int l = find(uni[i]->left), r = find(uni[i]->right);
      if (l < 0 || r < 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if (leq[static_cast<size_t>(l)][j] && leq[static_cast<size_t>(r)][j] && !leq[i][j]) {
          leq[i][j] = true;
          changed = true;
        }
      }
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
          if (leq[i][j] && leq[j][k] && !leq[i][k]) {
            leq[i][k] = true;
            changed = true;
          }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      CAPTURE(print_type(uni[i]));
      CAPTURE(print_type(uni[j]));
      CHECK(subtype_iu(uni[i], uni[j]) == leq[i][j]);
    }
}

TEST_CASE("intersection/union proof search") {
  auto uni = iu_type_universe();
  IuOptions plain;
  plain.arith = true;
  IuOptions orE = plain;
  orE.with_orE = true;

  SUBCASE("self-application against an intersection domain") {
    TypePtr target = ty("((nat -> even) & nat) -> even");
    std::vector<TypePtr> with_dom = uni;
    with_dom.push_back(ty("(nat -> even) & nat"));
    CHECK(typable_iu({}, ex("fun x . x x"), target, with_dom, plain));
  }

  SUBCASE("choice types at the union of its branch types") {
    CHECK(typable_iu({}, ex("1 (+) 2"), ty("even | odd"), uni, plain));
    CHECK(typable_iu({}, ex("1 (+) 2"), ty("odd | even"), uni, plain));
    CHECK_FALSE(typable_iu({}, ex("1 (+) 2"), ty("even"), uni, plain));
    CHECK_FALSE(typable_iu({}, ex("1 (+) 2"), ty("odd"), uni, plain));
  }

  SUBCASE("parity of constants and of prefix plus") {
    CHECK(typable_iu({}, ex("2"), ty("even"), uni, plain));
    CHECK(typable_iu({}, ex("1"), ty("odd"), uni, plain));
    CHECK_FALSE(typable_iu({}, ex("1"), ty("even"), uni, plain));
    CHECK(typable_iu({}, ex("+ 1 1"), ty("even"), uni, plain));
    CHECK(typable_iu({}, ex("+ 2 2"), ty("even"), uni, plain));
    CHECK_FALSE(typable_iu({}, ex("+ 1 2"), ty("even"), uni, plain));
  }

  SUBCASE("union elimination types the duplicated choice, and only then") {
    ExprPtr dup = ex("+ (1 (+) 2) (1 (+) 2)");
    CHECK_FALSE(typable_iu({}, dup, ty("even"), uni, plain));
    CHECK(typable_iu({}, dup, ty("even"), uni, orE));
  }

  SUBCASE("intersection introduction") {
    CHECK(typable_iu({}, ex("2"), ty("nat & even"), uni, plain));
    CHECK_FALSE(typable_iu({}, ex("1"), ty("nat & even"), uni, plain));
  }

  SUBCASE("rec types are rejected here") {
    CHECK_THROWS_AS(typable_iu({}, ex("0"), ty("rec a . a -> nat"), uni, plain),
                    std::invalid_argument);
  }
}

TEST_CASE("predicate plug-ins expose holds and universes") {
  IndexedPredicate simple = simple_types_predicate();
  Config id3 = to_config(ex("(fun x . x) 3"));
  bool holds_some = false;
  for (const PredicateIndex& i : simple.index_universe(id3))
    if (simple.holds(i, id3)) holds_some = true;
  CHECK(holds_some);
  CHECK(simple.holds(type_index(ty("nat")), id3));
  CHECK_FALSE(simple.holds(type_index(ty("nat")), to_config(ex("0 0"))));

  IndexedPredicate fool = simple_types_fool_predicate();
  CHECK(fool.holds(type_index(ty("nat")), to_config(ex("0 0"))));
  CHECK(fool.holds(type_index(ty("nat")), to_config(ex("succ (0 0)"))));

  IndexedPredicate iu = iu_types_predicate(false);
  CHECK(iu.holds(type_index(ty("even | odd")), to_config(ex("1 (+) 2"))));
  IndexedPredicate orE = iu_types_predicate(true);
  CHECK(orE.holds(type_index(ty("even")), to_config(ex("+ (1 (+) 2) (1 (+) 2)"))));
  CHECK_FALSE(iu.holds(type_index(ty("even")), to_config(ex("+ (1 (+) 2) (1 (+) 2)"))));
}
