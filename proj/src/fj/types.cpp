// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/fj/types.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace bsw::fj {

// --------------------------------------------------------------------------
// MiniFJ&lambda typing
// --------------------------------------------------------------------------

bool fjl_lambda_checks(const ClassTable& ct, const ExprPtr& lam, const std::string& target) {
  if (lam->kind != Expr::Kind::Lambda) return false;
  auto sig = ct.umtype(target);
  if (!sig || sig->param_types.size() != lam->params.size()) return false;
  FjlEnv env;
  for (size_t i = 0; i < lam->params.size(); ++i) env[lam->params[i]] = sig->param_types[i];
  // the body is never itself a lambda, so plain subsumption applies
  auto t = typecheck_fjl(ct, env, lam->body);
  return t && ct.subtype(*t, sig->ret);
}

namespace {

// Argument positions take lambdas at their exact target type, everything else
// up to subtyping.
bool fjl_arg_ok(const ClassTable& ct, const FjlEnv& env, const ExprPtr& arg,
                const std::string& target) {
  if (arg->kind == Expr::Kind::Lambda) return fjl_lambda_checks(ct, arg, target);
  auto t = typecheck_fjl(ct, env, arg);
  return t && ct.subtype(*t, target);
}

}  // namespace

std::optional<std::string> typecheck_fjl(const ClassTable& ct, const FjlEnv& env,
                                         const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Lambda: return std::nullopt;  // needs a target type
    case Expr::Kind::FieldAccess: {
      auto recv = typecheck_fjl(ct, env, e->recv);
      if (!recv || !ct.has_class(*recv)) return std::nullopt;  // receivers must be classes
      for (const auto& [ftype, fname] : ct.fields(*recv))
        if (fname == e->name) return ftype;
      return std::nullopt;
    }
    case Expr::Kind::New: {
      if (!ct.has_class(e->name)) return std::nullopt;
      auto fs = ct.fields(e->name);
      if (fs.size() != e->args.size()) return std::nullopt;
      for (size_t i = 0; i < fs.size(); ++i)
        if (!fjl_arg_ok(ct, env, e->args[i], fs[i].first)) return std::nullopt;
      return e->name;
    }
    case Expr::Kind::Invoke: {
      if (e->recv->kind == Expr::Kind::Lambda) return std::nullopt;  // forbidden receiver
      auto recv = typecheck_fjl(ct, env, e->recv);
      if (!recv) return std::nullopt;
      auto sigs = ct.mtype(*recv, e->name);
      if (!sigs || sigs->size() != 1) return std::nullopt;
      const MethodSig& sig = (*sigs)[0];
      if (sig.param_types.size() != e->args.size()) return std::nullopt;
      for (size_t i = 0; i < e->args.size(); ++i)
        if (!fjl_arg_ok(ct, env, e->args[i], sig.param_types[i])) return std::nullopt;
      return sig.ret;
    }
    case Expr::Kind::Cast: {
      if (!ct.is_type(e->name)) return std::nullopt;
      if (e->recv->kind == Expr::Kind::Lambda)
        return fjl_lambda_checks(ct, e->recv, e->name) ? std::optional(e->name) : std::nullopt;
      auto t = typecheck_fjl(ct, env, e->recv);
      if (!t || !ct.subtype(*t, e->name)) return std::nullopt;
      return e->name;
    }
    case Expr::Kind::ObjectVal: {
      if (!ct.has_class(e->name)) return std::nullopt;
      auto fs = ct.fields(e->name);
      if (fs.size() != e->args.size()) return std::nullopt;
      for (size_t i = 0; i < fs.size(); ++i)
        if (!fjl_value_fits(ct, e->args[i], fs[i].first)) return std::nullopt;
      return e->name;
    }
    default: return std::nullopt;  // booleans, conditionals, assignment, ids
  }
}

bool fjl_value_fits(const ClassTable& ct, const ExprPtr& value, const std::string& type) {
  if (value->kind == Expr::Kind::Lambda) {
    // results may sit at a subtype of the required type
    for (const std::string& iface : ct.interface_names())
      if (ct.subtype(iface, type) && fjl_lambda_checks(ct, value, iface)) return true;
    return false;
  }
  auto t = typecheck_fjl(ct, {}, value);
  return t && ct.subtype(*t, type);
}

namespace {

// Environment typings Gamma compatible with the stored values (the stored
// value may sit at a subtype of the declared type).
bool fjl_env_config_holds(const ClassTable& ct, const FjConfig& fc, const std::string& type) {
  std::vector<std::pair<std::string, ExprPtr>> vars(fc.env.begin(), fc.env.end());
  std::vector<std::string> candidates = ct.type_names();
  FjlEnv env;
  std::function<bool(size_t)> assign = [&](size_t i) -> bool {
    if (i == vars.size()) {
      auto t = typecheck_fjl(ct, env, fc.expr);
      return t && ct.subtype(*t, type);
    }
    for (const std::string& cand : candidates) {
      if (!fjl_value_fits(ct, vars[i].second, cand)) continue;
      env[vars[i].first] = cand;
      if (assign(i + 1)) return true;
    }
    env.erase(vars[i].first);
    return false;
  };
  return assign(0);
}

}  // namespace

IndexedPredicate fjl_predicate(TablePtr ct) {
  IndexedPredicate P;
  P.id = "fjl";
  auto cache = std::make_shared<std::map<std::string, bool>>();
  P.holds = [ct, cache](const PredicateIndex& i, const Config& c) {
    std::string key = i.text() + '|' + c.text();
    auto hit = cache->find(key);
    if (hit != cache->end()) return hit->second;
    const std::string& type = i.payload<std::string>();
    const FjConfig& fc = fj_of(c);
    bool ok = false;
    if (fc.kind == FjConfig::Kind::Plain)
      ok = is_fjl_value(fc.expr) ? fjl_value_fits(*ct, fc.expr, type) : false;
    else if (fc.kind == FjConfig::Kind::EnvExpr)
      ok = fjl_env_config_holds(*ct, fc, type);
    cache->emplace(std::move(key), ok);
    return ok;
  };
  P.index_universe = [ct](const Config&) {
    std::vector<PredicateIndex> out;
    for (const std::string& t : ct->type_names())
      out.push_back(PredicateIndex::make<std::string>(std::make_shared<std::string>(t), t));
    return out;
  };
  P.s1_oracle = nullptr;  // the index-universe search covers the small tables
  return P;
}

// --------------------------------------------------------------------------
// MiniFJ&O typing
// --------------------------------------------------------------------------

FjoType FjoType::unions(std::vector<std::string> cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return {false, std::move(cs)};
}

std::string FjoType::text() const {
  if (is_bool) return "bool";
  std::ostringstream os;
  for (size_t i = 0; i < classes.size(); ++i) {
    if (i) os << '|';
    os << classes[i];
  }
  return os.str();
}

bool fjo_subtype(const ClassTable& ct, const FjoType& a, const FjoType& b) {
  if (a.is_bool || b.is_bool) return a.is_bool && b.is_bool;
  if (a.classes.size() == 1) {
    for (const std::string& d : b.classes)
      if (ct.subtype(a.classes[0], d)) return true;
    return false;
  }
  // union terms embed into wider unions member-wise
  for (const std::string& c : a.classes)
    if (std::find(b.classes.begin(), b.classes.end(), c) == b.classes.end()) return false;
  return true;
}

namespace {

FjoType named_fjo_type(const std::string& name) {
  return name == "bool" ? FjoType::boolean() : FjoType::single(name);
}

struct FjoSearch {
  const ClassTable& ct;
  std::set<std::string> proven;
  std::map<std::string, int> failed_at;

  std::string key(const std::map<std::string, std::string>& env, const ExprPtr& e,
                  const FjoType& t) {
    std::ostringstream os;
    for (const auto& [x, c] : env) os << x << ':' << c << ';';
    os << '|' << print_expr(e) << '|' << t.text();
    return os.str();
  }

  bool prove(const std::map<std::string, std::string>& env, const ExprPtr& e, const FjoType& t,
             int d) {
    std::string k = key(env, e, t);
    if (proven.count(k)) return true;
    if (d <= 0) return false;
    auto f = failed_at.find(k);
    if (f != failed_at.end() && f->second >= d) return false;
    bool ok = attempt(env, e, t, d);
    if (ok)
      proven.insert(k);
    else
      failed_at[k] = d;
    return ok;
  }

  bool attempt(const std::map<std::string, std::string>& env, const ExprPtr& e, const FjoType& t,
               int d) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = env.find(e->name);
        return it != env.end() && fjo_subtype(ct, named_fjo_type(it->second), t);
      }
      case Expr::Kind::BoolLit: return t.is_bool;
      case Expr::Kind::New: {
        if (!ct.has_class(e->name)) return false;
        auto fs = ct.fields(e->name);
        if (fs.size() != e->args.size()) return false;
        if (!fjo_subtype(ct, FjoType::single(e->name), t)) return false;
        for (size_t i = 0; i < fs.size(); ++i)
          if (!prove(env, e->args[i], FjoType::single(fs[i].first), d - 1)) return false;
        return true;
      }
      case Expr::Kind::FieldAccess: {
        for (const std::string& cls : ct.class_names()) {
          auto idx = ct.field_index(cls, e->name);
          if (!idx) continue;
          if (!fjo_subtype(ct, FjoType::single(ct.fields(cls)[static_cast<size_t>(*idx)].first),
                           t))
            continue;
          if (prove(env, e->recv, FjoType::single(cls), d - 1)) return true;
        }
        return false;
      }
      case Expr::Kind::If:
        return prove(env, e->recv, FjoType::boolean(), d - 1) &&
               prove(env, e->body, t, d - 1) && prove(env, e->alt, t, d - 1);
      case Expr::Kind::Invoke: return invoke(env, e, t, d);
      default: return false;
    }
  }

  // Rule t-invk: a distinct-typed prefix plus a duplicated union-typed
  // suffix, matched against intersection components with a common return.
  bool invoke(const std::map<std::string, std::string>& env, const ExprPtr& e, const FjoType& t,
              int d) {
    size_t n = e->args.size();
    for (const std::string& recv_cls : ct.class_names()) {
      auto sigs = ct.mtype(recv_cls, e->name);
      if (!sigs) continue;
      if (!prove(env, e->recv, FjoType::single(recv_cls), d - 1)) continue;
      size_t max_p = 0;
      while (max_p < n && expr_eq(e->args[n - 1 - max_p], e->args[n - 1])) ++max_p;
      for (size_t p = 0; p <= max_p; ++p) {
        size_t q = n - p;
        // group candidate components by their shared prefix and return type
        std::map<std::string, std::vector<const MethodSig*>> groups;
        for (const MethodSig& sig : *sigs) {
          if (sig.param_types.size() != n) continue;
          bool dup_ok = true;
          for (size_t j = q; j + 1 < n; ++j)
            if (sig.param_types[j] != sig.param_types[j + 1]) dup_ok = false;
          if (p > 0 && !dup_ok) continue;
          std::ostringstream gk;
          for (size_t j = 0; j < q; ++j) gk << sig.param_types[j] << ',';
          gk << "->" << sig.ret;
          groups[gk.str()].push_back(&sig);
        }
        for (const auto& [_, members] : groups) {
          const MethodSig& rep = *members.front();
          if (!fjo_subtype(ct, named_fjo_type(rep.ret), t)) continue;
          bool prefix_ok = true;
          for (size_t j = 0; j < q && prefix_ok; ++j)
            prefix_ok = prove(env, e->args[j], named_fjo_type(rep.param_types[j]), d - 1);
          if (!prefix_ok) continue;
          if (p == 0) return true;
          std::vector<std::string> duplicated;
          bool any_bool = false;
          for (const MethodSig* sig : members) {
            if (sig->param_types[q] == "bool") any_bool = true;
            duplicated.push_back(sig->param_types[q]);
          }
          FjoType dup_type = any_bool ? FjoType::boolean() : FjoType::unions(std::move(duplicated));
          if (any_bool && members.size() > 1) continue;  // no unions over bool
          if (prove(env, e->args[n - 1], dup_type, d - 1)) return true;
        }
      }
    }
    return false;
  }
};

std::shared_ptr<std::string> boxed(const std::string& s) {
  return std::make_shared<std::string>(s);
}

}  // namespace

bool typecheck_fjo(const ClassTable& ct, const std::map<std::string, std::string>& env,
                   const ExprPtr& e, const FjoType& t, int depth) {
  FjoSearch search{ct, {}, {}};
  return search.prove(env, e, t, depth);
}

IndexedPredicate fjo_predicate(TablePtr ct) {
  IndexedPredicate P;
  P.id = "fjo";
  auto cache = std::make_shared<std::map<std::string, bool>>();
  auto parse_type = [](const std::string& text) {
    if (text == "bool") return FjoType::boolean();
    std::vector<std::string> cs;
    std::string cur;
    for (char ch : text) {
      if (ch == '|') {
        cs.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cs.push_back(cur);
    return FjoType::unions(std::move(cs));
  };
  P.holds = [ct, cache, parse_type](const PredicateIndex& i, const Config& c) {
    std::string key = i.text() + '|' + c.text();
    auto hit = cache->find(key);
    if (hit != cache->end()) return hit->second;
    const FjConfig& fc = fj_of(c);
    bool ok = fc.kind == FjConfig::Kind::Plain &&
              typecheck_fjo(*ct, {}, fc.expr, parse_type(i.text()), 8);
    cache->emplace(std::move(key), ok);
    return ok;
  };
  P.index_universe = [ct](const Config&) {
    std::vector<PredicateIndex> out;
    auto add = [&](const FjoType& t) {
      out.push_back(PredicateIndex::make<std::string>(boxed(t.text()), t.text()));
    };
    add(FjoType::boolean());
    auto classes = ct->class_names();
    for (const std::string& c : classes) add(FjoType::single(c));
    for (size_t i = 0; i < classes.size(); ++i)
      for (size_t j = i + 1; j < classes.size(); ++j)
        add(FjoType::unions({classes[i], classes[j]}));
    return out;
  };
  P.s1_oracle = nullptr;
  return P;
}

// --------------------------------------------------------------------------
// Imperative FJ typing
// --------------------------------------------------------------------------

std::optional<std::string> typecheck_fji(const ClassTable& ct,
                                         const std::map<std::string, std::string>& env,
                                         const TypeAssignment& sigma, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::ObjectId: {
      auto it = sigma.find(e->oid);
      if (it == sigma.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::FieldAccess: {
      auto recv = typecheck_fji(ct, env, sigma, e->recv);
      if (!recv || !ct.has_class(*recv)) return std::nullopt;
      for (const auto& [ftype, fname] : ct.fields(*recv))
        if (fname == e->name) return ftype;
      return std::nullopt;
    }
    case Expr::Kind::New: {
      if (!ct.has_class(e->name)) return std::nullopt;
      auto fs = ct.fields(e->name);
      if (fs.size() != e->args.size()) return std::nullopt;
      for (size_t i = 0; i < fs.size(); ++i) {
        auto t = typecheck_fji(ct, env, sigma, e->args[i]);
        if (!t || !ct.subtype(*t, fs[i].first)) return std::nullopt;
      }
      return e->name;
    }
    case Expr::Kind::Invoke: {
      auto recv = typecheck_fji(ct, env, sigma, e->recv);
      if (!recv || !ct.has_class(*recv)) return std::nullopt;
      auto sigs = ct.mtype(*recv, e->name);
      if (!sigs || sigs->size() != 1) return std::nullopt;
      const MethodSig& sig = (*sigs)[0];
      if (sig.param_types.size() != e->args.size()) return std::nullopt;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto t = typecheck_fji(ct, env, sigma, e->args[i]);
        if (!t || !ct.subtype(*t, sig.param_types[i])) return std::nullopt;
      }
      return sig.ret;
    }
    case Expr::Kind::FieldAssign: {
      auto recv = typecheck_fji(ct, env, sigma, e->recv);
      if (!recv || !ct.has_class(*recv)) return std::nullopt;
      auto idx = ct.field_index(*recv, e->name);
      if (!idx) return std::nullopt;
      std::string ftype = ct.fields(*recv)[static_cast<size_t>(*idx)].first;
      auto rhs = typecheck_fji(ct, env, sigma, e->body);
      if (!rhs || !ct.subtype(*rhs, ftype)) return std::nullopt;
      return ftype;
    }
    default: return std::nullopt;
  }
}

namespace {

// The allocation-recorded assignment: each identifier at its object's class.
TypeAssignment exact_assignment(const std::map<long, ExprPtr>& memory) {
  TypeAssignment sigma;
  for (const auto& [id, state] : memory) sigma[id] = state->name;
  return sigma;
}

bool fji_memory_wellformed(const ClassTable& ct, const std::map<long, ExprPtr>& memory,
                           const TypeAssignment& sigma) {
  for (const auto& [id, state] : memory) {
    (void)id;
    if (state->kind != Expr::Kind::New || !ct.has_class(state->name)) return false;
    auto fs = ct.fields(state->name);
    if (fs.size() != state->args.size()) return false;
    for (size_t i = 0; i < fs.size(); ++i) {
      const ExprPtr& v = state->args[i];
      if (v->kind != Expr::Kind::ObjectId) return false;
      auto it = sigma.find(v->oid);
      if (it == sigma.end() || !ct.subtype(it->second, fs[i].first)) return false;
    }
  }
  return true;
}

}  // namespace

bool fji_config_holds(const ClassTable& ct, const TypeAssignment& sigma, const std::string& cls,
                      const Config& config) {
  const FjConfig& fc = fj_of(config);
  if (fc.kind != FjConfig::Kind::MemExpr) return false;
  TypeAssignment exact = exact_assignment(fc.memory);
  for (const auto& [id, c] : sigma) {
    auto it = exact.find(id);
    if (it == exact.end() || it->second != c) return false;  // Sigma must extend into exact
  }
  if (!fji_memory_wellformed(ct, fc.memory, exact)) return false;
  auto t = typecheck_fji(ct, {}, exact, fc.expr);
  return t && ct.subtype(*t, cls);
}

namespace {

std::string sigma_text(const TypeAssignment& sigma) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [id, c] : sigma) {
    if (!first) os << ';';
    first = false;
    os << '@' << id << ':' << c;
  }
  os << '}';
  return os.str();
}

}  // namespace

IndexedPredicate fji_predicate(TablePtr ct) {
  IndexedPredicate P;
  P.id = "fji";
  P.report_note =
      "fji local-preservation witnesses thread the type assignment left to right: each "
      "premise index pairs the allocation-recorded assignment of its own memory with the "
      "checked class";
  using Index = std::pair<TypeAssignment, std::string>;
  auto make_index = [](TypeAssignment sigma, std::string cls) {
    std::string text = sigma_text(sigma) + ';' + cls;
    return PredicateIndex::make<Index>(
        std::make_shared<Index>(std::move(sigma), std::move(cls)), std::move(text));
  };
  auto cache = std::make_shared<std::map<std::string, bool>>();
  P.holds = [ct, cache](const PredicateIndex& i, const Config& c) {
    std::string key = i.text() + '|' + c.text();
    auto hit = cache->find(key);
    if (hit != cache->end()) return hit->second;
    const Index& idx = i.payload<Index>();
    bool ok = fji_config_holds(*ct, idx.first, idx.second, c);
    cache->emplace(std::move(key), ok);
    return ok;
  };
  P.index_universe = [ct, make_index](const Config& c) {
    std::vector<PredicateIndex> out;
    const FjConfig& fc = fj_of(c);
    if (fc.kind != FjConfig::Kind::MemExpr) return out;
    TypeAssignment sigma = exact_assignment(fc.memory);
    for (const std::string& cls : ct->class_names()) out.push_back(make_index(sigma, cls));
    return out;
  };
  // The oracle threads the growing memory left to right: each premise gets
  // the allocation-recorded assignment of its own configuration.
  P.s1_oracle = [ct, make_index](const RuleInstance& inst, const PredicateIndex& conclusion)
      -> std::optional<std::vector<PredicateIndex>> {
    std::vector<PredicateIndex> out;
    for (int k = 1; k <= inst.arity(); ++k) {
      if (k == inst.arity()) {
        out.push_back(conclusion);
        break;
      }
      const Config& ck = inst.premises[static_cast<size_t>(k - 1)].config;
      const FjConfig& fc = fj_of(ck);
      if (fc.kind != FjConfig::Kind::MemExpr) return std::nullopt;
      TypeAssignment sigma = exact_assignment(fc.memory);
      auto t = typecheck_fji(*ct, {}, sigma, fc.expr);
      if (!t) return std::nullopt;
      out.push_back(make_index(std::move(sigma), *t));
    }
    return out;
  };
  return P;
}

// --------------------------------------------------------------------------
// Loading
// --------------------------------------------------------------------------

namespace {

[[noreturn]] void body_error(const std::string& cls, const std::string& method,
                             const std::string& why) {
  throw TableError("class table violates 'method bodies typecheck': " + cls + "." + method +
                   " (" + why + ")");
}

void check_bodies(const ClassTable& ct) {
  for (const std::string& cname : ct.class_names()) {
    const ClassDef& cd = ct.cls(cname);
    for (const auto& [mname, md] : cd.methods) {
      switch (ct.flavor()) {
        case Flavor::FjLambda: {
          const MethodSig& sig = md.components[0];
          FjlEnv env;
          for (size_t i = 0; i < md.params.size(); ++i) env[md.params[i]] = sig.param_types[i];
          env["this"] = cname;
          if (md.body->kind == Expr::Kind::Lambda) {
            if (!fjl_lambda_checks(ct, md.body, sig.ret))
              body_error(cname, mname, "lambda body does not match the return target type");
          } else {
            auto t = typecheck_fjl(ct, env, md.body);
            if (!t || !ct.subtype(*t, sig.ret))
              body_error(cname, mname, "body does not have the declared return type");
          }
          break;
        }
        case Flavor::FjUnion: {
          for (const MethodSig& sig : md.components) {
            std::map<std::string, std::string> env;
            for (size_t i = 0; i < md.params.size(); ++i)
              env[md.params[i]] = sig.param_types[i];
            env["this"] = cname;
            if (!typecheck_fjo(ct, env, md.body, named_fjo_type(sig.ret), 8))
              body_error(cname, mname,
                         "body does not have the declared return type for component " +
                             sig.ret);
          }
          break;
        }
        case Flavor::FjImperative: {
          const MethodSig& sig = md.components[0];
          std::map<std::string, std::string> env;
          for (size_t i = 0; i < md.params.size(); ++i) env[md.params[i]] = sig.param_types[i];
          env["this"] = cname;
          auto t = typecheck_fji(ct, env, {}, md.body);
          if (!t || !ct.subtype(*t, sig.ret))
            body_error(cname, mname, "body does not have the declared return type");
          break;
        }
      }
    }
  }
}

}  // namespace

ClassTable load_class_table(const std::string& source, Flavor flavor) {
  Program p = parse_program(source);
  ClassTable ct = ClassTable::build(std::move(p), flavor);
  check_bodies(ct);
  return ct;
}

TablePtr load_table_ptr(const std::string& source, Flavor flavor) {
  return std::make_shared<const ClassTable>(load_class_table(source, flavor));
}

}  // namespace bsw::fj
