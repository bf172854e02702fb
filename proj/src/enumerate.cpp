// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/enumerate.hpp"

#include <map>
#include <random>

#include "bsw/lambda/ast.hpp"

namespace bsw {

namespace {

using lam::Expr;
using lam::ExprPtr;

const long kConstPool[] = {0, 1, 2};

std::string var_name(int depth) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v"};
  if (depth < 6) return names[depth];
  return "x" + std::to_string(depth);
}

class LamEnumerator {
 public:
  explicit LamEnumerator(bool with_plus) : with_plus_(with_plus) {}

  // All terms with exactly `size` non-variable nodes under `depth` binders.
  const std::vector<ExprPtr>& exact(int size, int depth) {
    auto key = std::make_pair(size, depth);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<ExprPtr> out;
    if (size == 0) {
      for (int k = 0; k < depth; ++k) out.push_back(lam::e_var(var_name(k)));
    } else {
      if (size == 1)
        for (long n : kConstPool) out.push_back(lam::e_const(n));
      for (const ExprPtr& b : exact(size - 1, depth)) out.push_back(lam::e_succ(b));
      for (const ExprPtr& b : exact(size - 1, depth + 1))
        out.push_back(lam::e_abs(var_name(depth), b));
      for (int s1 = 0; s1 <= size - 1; ++s1) {
        int s2 = size - 1 - s1;
        for (const ExprPtr& l : exact(s1, depth)) {
          for (const ExprPtr& r : exact(s2, depth)) {
            out.push_back(lam::e_app(l, r));
            out.push_back(lam::e_choice(l, r));
            if (with_plus_) out.push_back(lam::e_plus(l, r));
          }
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  bool with_plus_;
  std::map<std::pair<int, int>, std::vector<ExprPtr>> memo_;
};

ExprPtr random_term(std::mt19937_64& rng, int budget, int depth, bool with_plus) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto leaf = [&]() -> ExprPtr {
    if (depth > 0 && pick(3) == 0) return lam::e_var(var_name(pick(depth)));
    return lam::e_const(kConstPool[pick(3)]);
  };
  if (budget <= 1) return leaf();
  int kinds = budget >= 3 ? (with_plus ? 6 : 5) : 3;
  switch (pick(kinds)) {
    case 0: return leaf();
    case 1: return lam::e_succ(random_term(rng, budget - 1, depth, with_plus));
    case 2: return lam::e_abs(var_name(depth), random_term(rng, budget - 1, depth + 1, with_plus));
    default: {
      int s1 = 1 + pick(budget - 2);
      ExprPtr l = random_term(rng, s1, depth, with_plus);
      ExprPtr r = random_term(rng, budget - 1 - s1, depth, with_plus);
      int kind = pick(kinds - 3);
      if (kind == 0) return lam::e_app(l, r);
      if (kind == 1 || !with_plus) return lam::e_choice(l, r);
      return lam::e_plus(l, r);
    }
  }
}

}  // namespace

std::vector<Config> gen_lam_terms(const GenSpec& g, bool with_plus) {
  std::vector<Config> out;
  if (g.mode == GenSpec::Mode::Exhaustive) {
    LamEnumerator en(with_plus);
    for (int s = 1; s <= g.max_size; ++s)
      for (const ExprPtr& e : en.exact(s, 0)) out.push_back(lam::to_config(e));
    return out;
  }
  std::mt19937_64 rng(g.seed);
  for (int i = 0; i < g.count; ++i) {
    ExprPtr e = random_term(rng, g.max_size, 0, with_plus);
    out.push_back(lam::to_config(e));
  }
  return out;
}

std::vector<Result> lam_result_pool() {
  std::vector<Result> pool;
  for (const char* s : {"0", "1", "2", "3", "fun x . x", "fun x . succ x", "fun x . x x",
                        "fun x . fun y . y", "fun x . 0", "fun x : nat . x"})
    pool.push_back(Result{lam::to_config(lam::parse_expr(s))});
  return pool;
}

std::vector<std::pair<Config, PredicateIndex>> gen_welltyped(const std::vector<Config>& terms,
                                                             const IndexedPredicate& P,
                                                             int max_pairs_per_config) {
  std::vector<std::pair<Config, PredicateIndex>> out;
  for (const Config& c : terms) {
    int emitted = 0;
    for (const PredicateIndex& i : P.index_universe(c)) {
      if (emitted >= max_pairs_per_config) break;
      if (P.holds(i, c)) {
        out.emplace_back(c, i);
        ++emitted;
      }
    }
  }
  return out;
}

}  // namespace bsw

// --------------------------------------------------------------------------
// Java-like corpora
// --------------------------------------------------------------------------

#include "bsw/fj/semantics.hpp"

namespace bsw {

namespace {

namespace fja = bsw::fj;

// All ways of splitting `total` into `parts` non-negative summands.
void splits(int total, int parts, std::vector<int>& acc,
            const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 0) {
    if (total == 0) emit(acc);
    return;
  }
  for (int first = 0; first <= total; ++first) {
    acc.push_back(first);
    splits(total - first, parts - 1, acc, emit);
    acc.pop_back();
  }
}

class FjEnumerator {
 public:
  FjEnumerator(const fja::ClassTable& ct, fja::Flavor flavor) : ct_(ct), flavor_(flavor) {
    for (const std::string& cls : ct_.class_names()) {
      for (const auto& [ftype, fname] : ct_.cls(cls).fields) {
        (void)ftype;
        if (field_seen_.insert(fname).second) fields_.push_back(fname);
      }
      for (const auto& [mname, md] : ct_.cls(cls).methods)
        if (method_seen_.insert(mname).second)
          methods_.emplace_back(mname, static_cast<int>(md.params.size()));
    }
    if (flavor_ == fja::Flavor::FjLambda)
      for (const std::string& iface : ct_.interface_names())
        if (auto sig = ct_.umtype(iface)) {
          int arity = static_cast<int>(sig->param_types.size());
          if (lambda_arity_seen_.insert(arity).second) lambda_arities_.push_back(arity);
        }
  }

  const std::vector<fja::ExprPtr>& exact(int size, int depth) {
    auto key = std::make_pair(size, depth);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<fja::ExprPtr> out;
    if (size == 0) {
      for (int k = 0; k < depth; ++k) out.push_back(fja::e_var(var_name(k)));
    } else {
      build(size, depth, out);
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void build(int size, int depth, std::vector<fja::ExprPtr>& out) {
    if (flavor_ == fja::Flavor::FjUnion && size == 1) {
      out.push_back(fja::e_bool(true));
      out.push_back(fja::e_bool(false));
    }
    // new C(...)
    for (const std::string& cls : ct_.class_names()) {
      int n = static_cast<int>(ct_.fields(cls).size());
      std::vector<int> acc;
      splits(size - 1, n, acc, [&](const std::vector<int>& ss) {
        std::vector<std::vector<fja::ExprPtr>> choices;
        for (int s : ss) choices.push_back(exact(s, depth));
        std::vector<fja::ExprPtr> args(static_cast<size_t>(n));
        product(choices, 0, args, [&](const std::vector<fja::ExprPtr>& a) {
          out.push_back(fja::e_new(cls, a));
        });
      });
    }
    // e.f
    for (const std::string& f : fields_)
      for (const fja::ExprPtr& r : exact(size - 1, depth)) out.push_back(fja::e_field(r, f));
    // e.m(...)
    for (const auto& [m, arity] : methods_) {
      std::vector<int> acc;
      splits(size - 1, arity + 1, acc, [&](const std::vector<int>& ss) {
        std::vector<std::vector<fja::ExprPtr>> choices;
        for (int s : ss) choices.push_back(exact(s, depth));
        std::vector<fja::ExprPtr> picked(static_cast<size_t>(arity + 1));
        product(choices, 0, picked, [&](const std::vector<fja::ExprPtr>& a) {
          std::vector<fja::ExprPtr> args(a.begin() + 1, a.end());
          out.push_back(fja::e_invoke(a[0], m, args));
        });
      });
    }
    if (flavor_ == fja::Flavor::FjLambda) {
      // <T> e
      for (const std::string& t : ct_.type_names())
        for (const fja::ExprPtr& r : exact(size - 1, depth)) out.push_back(fja::e_cast(t, r));
      // (x...) -> e  (bodies are not lambdas)
      for (int arity : lambda_arities_) {
        std::vector<std::string> params;
        for (int i = 0; i < arity; ++i) params.push_back(var_name(depth + i));
        for (const fja::ExprPtr& b : exact(size - 1, depth + arity))
          if (b->kind != fja::Expr::Kind::Lambda) out.push_back(fja::e_lambda(params, b));
      }
    }
    if (flavor_ == fja::Flavor::FjUnion) {
      std::vector<int> acc;
      splits(size - 1, 3, acc, [&](const std::vector<int>& ss) {
        for (const fja::ExprPtr& c : exact(ss[0], depth))
          for (const fja::ExprPtr& a : exact(ss[1], depth))
            for (const fja::ExprPtr& b : exact(ss[2], depth))
              out.push_back(fja::e_if(c, a, b));
      });
    }
    if (flavor_ == fja::Flavor::FjImperative) {
      for (const std::string& f : fields_) {
        std::vector<int> acc;
        splits(size - 1, 2, acc, [&](const std::vector<int>& ss) {
          for (const fja::ExprPtr& r : exact(ss[0], depth))
            for (const fja::ExprPtr& v : exact(ss[1], depth)) {
              fja::ExprPtr lhs = fja::e_field(r, f);
              // reuse the parser-level shape: assignment of field f of r
              bsw::fj::Expr node;
              node.kind = fja::Expr::Kind::FieldAssign;
              node.name = f;
              node.recv = r;
              node.body = v;
              out.push_back(std::make_shared<bsw::fj::Expr>(std::move(node)));
              (void)lhs;
            }
        });
      }
    }
  }

  static void product(const std::vector<std::vector<fja::ExprPtr>>& choices, size_t i,
                      std::vector<fja::ExprPtr>& acc,
                      const std::function<void(const std::vector<fja::ExprPtr>&)>& emit) {
    if (i == choices.size()) {
      emit(acc);
      return;
    }
    for (const fja::ExprPtr& e : choices[i]) {
      acc[i] = e;
      product(choices, i + 1, acc, emit);
    }
  }

  static std::string var_name(int depth) {
    static const char* names[] = {"x", "y", "z", "w", "u", "v"};
    if (depth < 6) return names[depth];
    return "x" + std::to_string(depth);
  }

  const fja::ClassTable& ct_;
  fja::Flavor flavor_;
  std::vector<std::string> fields_;
  std::set<std::string> field_seen_;
  std::vector<std::pair<std::string, int>> methods_;
  std::set<std::string> method_seen_;
  std::vector<int> lambda_arities_;
  std::set<int> lambda_arity_seen_;
  std::map<std::pair<int, int>, std::vector<fja::ExprPtr>> memo_;
};

Config embed_fj(const fja::ClassTable& ct, fja::ExprPtr e) {
  switch (ct.flavor()) {
    case fja::Flavor::FjLambda: return fja::env_config({}, std::move(e));
    case fja::Flavor::FjUnion: return fja::plain_config(std::move(e));
    case fja::Flavor::FjImperative: return fja::mem_config({}, std::move(e));
  }
  return fja::plain_config(std::move(e));
}

fja::ExprPtr random_fj(std::mt19937_64& rng, FjEnumerator& en, int budget, int depth) {
  // random choice among the exhaustive terms of a random affordable size
  for (int tries = 0; tries < 16; ++tries) {
    int s = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(budget));
    const auto& pool = en.exact(s, depth);
    if (pool.empty()) continue;
    return pool[static_cast<size_t>(rng() % pool.size())];
  }
  const auto& pool = en.exact(1, depth);
  return pool[static_cast<size_t>(rng() % pool.size())];
}

}  // namespace

std::vector<Config> gen_fj_terms(const GenSpec& g, const fj::ClassTable& ct) {
  FjEnumerator en(ct, ct.flavor());
  std::vector<Config> out;
  if (g.mode == GenSpec::Mode::Exhaustive) {
    for (int s = 1; s <= g.max_size; ++s)
      for (const fj::ExprPtr& e : en.exact(s, 0)) out.push_back(embed_fj(ct, e));
    return out;
  }
  std::mt19937_64 rng(g.seed);
  for (int i = 0; i < g.count; ++i) out.push_back(embed_fj(ct, random_fj(rng, en, g.max_size, 0)));
  return out;
}

std::vector<Result> fj_result_pool(const fj::ClassTable& ct) {
  std::vector<Result> pool;
  // the smallest value of each class, built by filling fields recursively
  std::function<fj::ExprPtr(const std::string&, int)> value_of =
      [&](const std::string& cls, int fuel) -> fj::ExprPtr {
    if (fuel <= 0) return nullptr;
    std::vector<fj::ExprPtr> args;
    for (const auto& [ftype, fname] : ct.fields(cls)) {
      (void)fname;
      if (!ct.has_class(ftype)) return nullptr;  // interface-typed field: skip
      fj::ExprPtr sub = value_of(ftype, fuel - 1);
      if (!sub) return nullptr;
      args.push_back(sub);
    }
    return ct.flavor() == fj::Flavor::FjLambda ? fj::e_object(cls, std::move(args))
                                               : fj::e_new(cls, std::move(args));
  };

  switch (ct.flavor()) {
    case fj::Flavor::FjLambda: {
      for (const std::string& cls : ct.class_names())
        if (fj::ExprPtr v = value_of(cls, 4)) pool.push_back(Result{fj::plain_config(v)});
      for (const std::string& iface : ct.interface_names())
        if (auto sig = ct.umtype(iface)) {
          std::vector<std::string> params;
          for (size_t i = 0; i < sig->param_types.size(); ++i)
            params.push_back("p" + std::to_string(i));
          pool.push_back(Result{fj::plain_config(fj::e_lambda(params, fj::e_var("p0")))});
        }
      break;
    }
    case fj::Flavor::FjUnion: {
      for (const std::string& cls : ct.class_names())
        if (fj::ExprPtr v = value_of(cls, 4)) pool.push_back(Result{fj::plain_config(v)});
      pool.push_back(Result{fj::plain_config(fj::e_bool(true))});
      pool.push_back(Result{fj::plain_config(fj::e_bool(false))});
      break;
    }
    case fj::Flavor::FjImperative: {
      // small memories: one object per class, fields pointing at fresh ids
      for (const std::string& cls : ct.class_names()) {
        std::map<long, fj::ExprPtr> mem;
        long next = 0;
        std::function<std::optional<long>(const std::string&, int)> alloc =
            [&](const std::string& c, int fuel) -> std::optional<long> {
          if (fuel <= 0) return std::nullopt;
          std::vector<fj::ExprPtr> ids;
          for (const auto& [ftype, fname] : ct.fields(c)) {
            (void)fname;
            auto sub = alloc(ftype, fuel - 1);
            if (!sub) return std::nullopt;
            ids.push_back(fj::e_oid(*sub));
          }
          long id = next++;
          mem[id] = fj::e_new(c, std::move(ids));
          return id;
        };
        if (auto id = alloc(cls, 4))
          pool.push_back(Result{fj::mem_config(mem, fj::e_oid(*id))});
      }
      break;
    }
  }
  return pool;
}

}  // namespace bsw
