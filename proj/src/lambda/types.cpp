// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/lambda/types.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bsw::lam {

namespace {

TypePtr type_subst(const TypePtr& t, const std::string& name, const TypePtr& s) {
  switch (t->kind) {
    case Type::Kind::Var: return t->name == name ? s : t;
    case Type::Kind::Mu:
      if (t->name == name) return t;
      return t_mu(t->name, type_subst(t->body, name, s));
    case Type::Kind::Arrow:
      return t_arrow(type_subst(t->left, name, s), type_subst(t->right, name, s));
    case Type::Kind::And:
      return t_and(type_subst(t->left, name, s), type_subst(t->right, name, s));
    case Type::Kind::Or:
      return t_or(type_subst(t->left, name, s), type_subst(t->right, name, s));
    default: return t;
  }
}

bool contractive_in(const TypePtr& t, std::set<std::string> unguarded) {
  switch (t->kind) {
    case Type::Kind::Var: return unguarded.count(t->name) == 0;
    case Type::Kind::Arrow:
      return contractive_in(t->left, {}) && contractive_in(t->right, {});
    case Type::Kind::Mu: {
      unguarded.insert(t->name);
      return contractive_in(t->body, unguarded);
    }
    case Type::Kind::And:
    case Type::Kind::Or:
      return contractive_in(t->left, unguarded) && contractive_in(t->right, unguarded);
    default: return true;
  }
}

// Unfolds top-level rec binders; terminates on contractive types.
TypePtr head_unfold(TypePtr t) {
  while (t->kind == Type::Kind::Mu) t = type_subst(t->body, t->name, t);
  return t;
}

bool type_equal_rec(const TypePtr& a, const TypePtr& b,
                    std::set<std::pair<std::string, std::string>>& assumed) {
  auto key = std::make_pair(print_type(a), print_type(b));
  if (key.first == key.second) return true;
  if (!assumed.insert(key).second) return true;  // coinductive hypothesis
  TypePtr ha = head_unfold(a);
  TypePtr hb = head_unfold(b);
  if (ha->kind != hb->kind) return false;
  switch (ha->kind) {
    case Type::Kind::Nat:
    case Type::Kind::Even:
    case Type::Kind::Odd: return true;
    case Type::Kind::Var: return ha->name == hb->name;
    case Type::Kind::Arrow:
      return type_equal_rec(ha->left, hb->left, assumed) &&
             type_equal_rec(ha->right, hb->right, assumed);
    default: return false;
  }
}

}  // namespace

bool type_contractive(const TypePtr& t) { return contractive_in(t, {}); }

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (type_contains_and_or(a) || type_contains_and_or(b))
    throw std::invalid_argument("type_equal: intersection/union nodes are not part of the "
                                "equi-recursive system");
  if (!type_contractive(a) || !type_contractive(b))
    throw std::invalid_argument("type_equal: non-contractive rec type");
  std::set<std::pair<std::string, std::string>> assumed;
  return type_equal_rec(a, b, assumed);
}

// --------------------------------------------------------------------------
// Simply-typed checking
// --------------------------------------------------------------------------

namespace {

bool is_nat_type(const TypePtr& t) { return head_unfold(t)->kind == Type::Kind::Nat; }

// Best-effort type synthesis used to propose application domains.
std::optional<TypePtr> synth(const TypeEnv& env, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Const: return t_nat();
    case Expr::Kind::Succ:
    case Expr::Kind::Plus: return t_nat();
    case Expr::Kind::Abs: {
      if (!e->anno) return std::nullopt;
      TypeEnv inner = env;
      inner[e->name] = *e->anno;
      auto body = synth(inner, e->body);
      if (!body) return std::nullopt;
      return t_arrow(*e->anno, *body);
    }
    case Expr::Kind::App: {
      auto f = synth(env, e->left);
      if (!f) return std::nullopt;
      TypePtr hd = head_unfold(*f);
      if (hd->kind != Type::Kind::Arrow) return std::nullopt;
      return hd->right;
    }
    case Expr::Kind::Choice: {
      auto l = synth(env, e->left);
      return l ? l : synth(env, e->right);
    }
  }
  return std::nullopt;
}

struct SimpleOptions {
  bool fool = false;  // the unsound extra axiom |- 0 0 : nat
};

bool is_zero_app(const Expr& e) {
  return e.kind == Expr::Kind::App && e.left->kind == Expr::Kind::Const && e.left->value == 0 &&
         e.right->kind == Expr::Kind::Const && e.right->value == 0;
}

bool check_simple(const TypeEnv& env, const ExprPtr& e, const TypePtr& t,
                  const std::vector<TypePtr>& universe, const SimpleOptions& opts) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      return it != env.end() && type_equal(it->second, t);
    }
    case Expr::Kind::Const: return is_nat_type(t);
    case Expr::Kind::Abs: {
      TypePtr hd = head_unfold(t);
      if (hd->kind != Type::Kind::Arrow) return false;
      if (e->anno && !type_equal(*e->anno, hd->left)) return false;
      TypeEnv inner = env;
      inner[e->name] = hd->left;
      return check_simple(inner, e->body, hd->right, universe, opts);
    }
    case Expr::Kind::Succ:
      return is_nat_type(t) && check_simple(env, e->body, t_nat(), universe, opts);
    case Expr::Kind::Choice:
      return check_simple(env, e->left, t, universe, opts) &&
             check_simple(env, e->right, t, universe, opts);
    case Expr::Kind::Plus:
      return is_nat_type(t) && check_simple(env, e->left, t_nat(), universe, opts) &&
             check_simple(env, e->right, t_nat(), universe, opts);
    case Expr::Kind::App: {
      if (opts.fool && is_zero_app(*e) && is_nat_type(t)) return true;
      std::vector<TypePtr> candidates;
      std::set<std::string> seen;
      auto add = [&](const TypePtr& c) {
        if (seen.insert(print_type(c)).second) candidates.push_back(c);
      };
      if (auto f = synth(env, e->left)) {
        TypePtr hd = head_unfold(*f);
        if (hd->kind == Type::Kind::Arrow) add(hd->left);
      }
      for (const TypePtr& u : universe) add(u);
      for (const TypePtr& a : candidates) {
        if (check_simple(env, e->left, t_arrow(a, t), universe, opts) &&
            check_simple(env, e->right, a, universe, opts))
          return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool typecheck_simple(const TypeEnv& env, const ExprPtr& e, const TypePtr& t,
                      const std::vector<TypePtr>& universe) {
  if (type_contains_and_or(t))
    throw std::invalid_argument("typecheck_simple: intersection/union target type");
  return check_simple(env, e, t, universe, {});
}

// --------------------------------------------------------------------------
// The intersection/union preorder and proof search
// --------------------------------------------------------------------------

bool subtype_iu(const TypePtr& a, const TypePtr& b) {
  if (type_syntactic_eq(a, b)) return true;
  if (b->kind == Type::Kind::Or && (subtype_iu(a, b->left) || subtype_iu(a, b->right)))
    return true;
  if (a->kind == Type::Kind::And && (subtype_iu(a->left, b) || subtype_iu(a->right, b)))
    return true;
  return false;
}

namespace {

std::string env_key(const TypeEnv& env) {
  std::ostringstream os;
  for (const auto& [x, t] : env) os << x << ':' << print_type(t) << ';';
  return os.str();
}

struct IuSearch {
  const std::vector<TypePtr>& universe;
  const IuOptions& opts;
  std::set<std::string> proven;
  std::map<std::string, int> failed_at;  // key -> depth that failed

  bool prove(const TypeEnv& env, const ExprPtr& e, const TypePtr& t, int d) {
    std::string key = env_key(env) + '|' + print_expr(e) + '|' + print_type(t);
    if (proven.count(key)) return true;
    if (d <= 0) return false;
    auto f = failed_at.find(key);
    if (f != failed_at.end() && f->second >= d) return false;
    bool ok = attempt(env, e, t, d);
    if (ok)
      proven.insert(key);
    else if (f == failed_at.end() || f->second < d)
      failed_at[key] = d;
    return ok;
  }

  bool attempt(const TypeEnv& env, const ExprPtr& e, const TypePtr& t, int d) {
    // target-directed introduction rules
    if (t->kind == Type::Kind::And)
      if (prove(env, e, t->left, d - 1) && prove(env, e, t->right, d - 1)) return true;
    if (t->kind == Type::Kind::Or)
      if (prove(env, e, t->left, d - 1) || prove(env, e, t->right, d - 1)) return true;

    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = env.find(e->name);
        if (it != env.end() && subtype_iu(it->second, t)) return true;
        break;
      }
      case Expr::Kind::Const: {
        if (subtype_iu(t_nat(), t)) return true;
        if (opts.arith) {
          TypePtr parity = e->value % 2 == 0 ? t_even() : t_odd();
          if (subtype_iu(parity, t)) return true;
        }
        break;
      }
      case Expr::Kind::Abs: {
        if (t->kind == Type::Kind::Arrow) {
          TypeEnv inner = env;
          inner[e->name] = t->left;
          if (prove(inner, e->body, t->right, d - 1)) return true;
        }
        break;
      }
      case Expr::Kind::Succ:
        if (subtype_iu(t_nat(), t) && prove(env, e->body, t_nat(), d - 1)) return true;
        break;
      case Expr::Kind::Choice:
        if (prove(env, e->left, t, d - 1) && prove(env, e->right, t, d - 1)) return true;
        break;
      case Expr::Kind::Plus: {
        if (!opts.arith) break;
        if (!subtype_iu(t_even(), t)) break;
        for (const TypePtr& arg : {t_even(), t_odd()})
          if (prove(env, e->left, arg, d - 1) && prove(env, e->right, arg, d - 1)) return true;
        break;
      }
      case Expr::Kind::App: {
        for (const TypePtr& a : universe)
          if (prove(env, e->left, t_arrow(a, t), d - 1) && prove(env, e->right, a, d - 1))
            return true;
        break;
      }
    }

    if (opts.with_orE && union_elim(env, e, t, d)) return true;
    return false;
  }

  // Union elimination: find e = e_abs[e'/x] with e' : A|B and e_abs typed at
  // t under both x:A and x:B.
  bool union_elim(const TypeEnv& env, const ExprPtr& e, const TypePtr& t, int d) {
    std::string fresh = "_u";
    std::set<std::string> fv;
    free_vars(e, fv);
    while (fv.count(fresh)) fresh += '_';
    std::set<std::string> tried;
    for (const ExprPtr& needle : subexprs(e)) {
      if (needle->kind == Expr::Kind::Var) continue;
      if (expr_eq(needle, e)) continue;
      if (!tried.insert(print_expr(needle)).second) continue;
      ExprPtr eabs = abstract_occurrences(e, needle, fresh);
      for (const TypePtr& u : universe) {
        if (u->kind != Type::Kind::Or) continue;
        TypeEnv left = env, right = env;
        left[fresh] = u->left;
        right[fresh] = u->right;
        if (prove(env, needle, u, d - 1) && prove(left, eabs, t, d - 1) &&
            prove(right, eabs, t, d - 1))
          return true;
      }
    }
    return false;
  }
};

}  // namespace

bool typable_iu(const TypeEnv& env, const ExprPtr& e, const TypePtr& t,
                const std::vector<TypePtr>& universe, const IuOptions& opts) {
  if (opts.depth < 1) throw std::invalid_argument("typable_iu: depth must be >= 1");
  if (type_contains_mu(t))
    throw std::invalid_argument("typable_iu: rec types are not part of this system");
  IuSearch search{universe, opts, {}, {}};
  return search.prove(env, e, t, opts.depth);
}

// --------------------------------------------------------------------------
// Predicate plug-ins
// --------------------------------------------------------------------------

std::vector<TypePtr> simple_type_universe() {
  TypePtr n = t_nat();
  TypePtr nn = t_arrow(n, n);
  TypePtr mu = t_mu("a", t_arrow(t_var("a"), t_nat()));
  return {n,
          nn,
          t_arrow(nn, n),
          t_arrow(n, nn),
          t_arrow(nn, nn),
          t_arrow(n, t_arrow(n, nn)),
          t_arrow(nn, t_arrow(n, n)),
          t_arrow(n, t_arrow(nn, n)),
          mu,
          t_arrow(mu, n)};
}

std::vector<TypePtr> iu_type_universe() {
  std::vector<TypePtr> base = {t_nat(), t_even(), t_odd()};
  std::vector<TypePtr> out = base;
  out.push_back(t_or(t_even(), t_odd()));
  out.push_back(t_or(t_odd(), t_even()));
  std::vector<TypePtr> args = base;
  args.push_back(t_or(t_even(), t_odd()));
  for (const TypePtr& a : args)
    for (const TypePtr& b : args) out.push_back(t_arrow(a, b));
  out.push_back(t_and(t_arrow(t_even(), t_arrow(t_even(), t_even())),
                      t_arrow(t_odd(), t_arrow(t_odd(), t_even()))));
  return out;
}

namespace {

// Candidate indexes: the search universe plus second-order arrows, so that
// local-preservation witnesses exist for curried functions. Deliberately
// wider than the proof-search universe, which must stay small.
std::vector<TypePtr> iu_index_types() {
  std::vector<TypePtr> out = iu_type_universe();
  std::vector<TypePtr> args = {t_nat(), t_even(), t_odd(), t_or(t_even(), t_odd())};
  for (const TypePtr& a : args)
    for (const TypePtr& b : args)
      for (const TypePtr& c : args) out.push_back(t_arrow(a, t_arrow(b, c)));
  return out;
}

}  // namespace

PredicateIndex type_index(const TypePtr& t) {
  return PredicateIndex::make<Type>(t, print_type(t));
}

namespace {

TypePtr index_type(const PredicateIndex& i) { return i.payload_ptr<Type>(); }

IndexedPredicate make_simple_predicate(std::string id, bool fool) {
  IndexedPredicate P;
  P.id = std::move(id);
  auto universe = std::make_shared<std::vector<TypePtr>>(simple_type_universe());
  auto cache = std::make_shared<std::map<std::string, bool>>();
  SimpleOptions opts{fool};

  P.holds = [universe, cache, opts](const PredicateIndex& i, const Config& c) {
    std::string key = i.text() + '|' + c.text();
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    bool ok = check_simple({}, expr_of(c), index_type(i), *universe, opts);
    cache->emplace(std::move(key), ok);
    return ok;
  };
  P.index_universe = [universe](const Config&) {
    std::vector<PredicateIndex> out;
    for (const TypePtr& t : *universe) out.push_back(type_index(t));
    return out;
  };
  P.s1_oracle = [universe, opts](const RuleInstance& inst, const PredicateIndex& conclusion)
      -> std::optional<std::vector<PredicateIndex>> {
    TypePtr t = index_type(conclusion);
    const std::string& rule = inst.rule_id;
    if (rule == "app") {
      if (inst.arity() != 3) return std::nullopt;
      ExprPtr e1 = expr_of(inst.premises[0].config);
      ExprPtr e2 = expr_of(inst.premises[1].config);
      std::vector<TypePtr> candidates = *universe;
      if (auto f = synth({}, e1)) {
        TypePtr hd = head_unfold(*f);
        if (hd->kind == Type::Kind::Arrow) candidates.insert(candidates.begin(), hd->left);
      }
      for (const TypePtr& a : candidates) {
        if (check_simple({}, e1, t_arrow(a, t), *universe, opts) &&
            check_simple({}, e2, a, *universe, opts))
          return std::vector<PredicateIndex>{type_index(t_arrow(a, t)), type_index(a),
                                             conclusion};
      }
      return std::nullopt;
    }
    if (rule == "succ") {
      if (inst.arity() != 2) return std::nullopt;
      return std::vector<PredicateIndex>{type_index(t_nat()), conclusion};
    }
    if (rule == "choice/1" || rule == "choice/2") {
      if (inst.arity() != 1) return std::nullopt;
      return std::vector<PredicateIndex>{conclusion};
    }
    if (rule == "plus") {
      if (inst.arity() != 3) return std::nullopt;
      return std::vector<PredicateIndex>{type_index(t_nat()), type_index(t_nat()), conclusion};
    }
    return std::nullopt;
  };
  return P;
}

}  // namespace

IndexedPredicate simple_types_predicate() { return make_simple_predicate("simple", false); }

IndexedPredicate simple_types_fool_predicate() {
  return make_simple_predicate("simple-fool", true);
}

IndexedPredicate iu_types_predicate(bool with_orE) {
  IndexedPredicate P;
  P.id = with_orE ? "union-orE" : "union";
  auto universe = std::make_shared<std::vector<TypePtr>>(iu_type_universe());
  auto indexes = std::make_shared<std::vector<TypePtr>>(iu_index_types());
  auto cache = std::make_shared<std::map<std::string, bool>>();
  IuOptions opts;
  opts.with_orE = with_orE;
  opts.arith = true;

  P.holds = [universe, cache, opts](const PredicateIndex& i, const Config& c) {
    std::string key = i.text() + '|' + c.text();
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    IuSearch search{*universe, opts, {}, {}};
    bool ok = search.prove({}, expr_of(c), index_type(i), opts.depth);
    cache->emplace(std::move(key), ok);
    return ok;
  };
  P.index_universe = [indexes](const Config&) {
    std::vector<PredicateIndex> out;
    for (const TypePtr& t : *indexes) out.push_back(type_index(t));
    return out;
  };
  P.s1_oracle = nullptr;
  return P;
}

}  // namespace bsw::lam
