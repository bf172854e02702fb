// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/fj/semantics.hpp"

#include <algorithm>
#include <sstream>

namespace bsw::fj {

namespace {

Config wrap(FjConfig c) {
  std::string text = print_config(c);
  std::shared_ptr<const FjConfig> node = std::make_shared<const FjConfig>(std::move(c));
  return Config::make(std::move(node), std::move(text));
}

}  // namespace

Config plain_config(ExprPtr e) {
  FjConfig c;
  c.kind = FjConfig::Kind::Plain;
  c.expr = std::move(e);
  return wrap(std::move(c));
}

Config env_config(std::map<std::string, ExprPtr> env, ExprPtr e) {
  if (e->kind == Expr::Kind::Lambda || e->kind == Expr::Kind::ObjectVal)
    return plain_config(std::move(e));
  FjConfig c;
  c.kind = FjConfig::Kind::EnvExpr;
  c.env = std::move(env);
  c.expr = std::move(e);
  return wrap(std::move(c));
}

Config mem_config(std::map<long, ExprPtr> memory, ExprPtr e) {
  FjConfig c;
  c.kind = FjConfig::Kind::MemExpr;
  c.memory = std::move(memory);
  c.expr = std::move(e);
  return wrap(std::move(c));
}

const FjConfig& fj_of(const Config& c) { return c.payload<FjConfig>(); }

std::string print_config(const FjConfig& c) {
  std::ostringstream os;
  switch (c.kind) {
    case FjConfig::Kind::Plain: os << print_expr(c.expr); break;
    case FjConfig::Kind::EnvExpr: {
      os << '<';
      bool first = true;
      for (const auto& [x, v] : c.env) {
        if (!first) os << "; ";
        first = false;
        os << x << '=' << print_expr(v);
      }
      os << " | " << print_expr(c.expr) << '>';
      break;
    }
    case FjConfig::Kind::MemExpr: {
      os << '<';
      bool first = true;
      for (const auto& [id, state] : c.memory) {
        if (!first) os << "; ";
        first = false;
        os << '@' << id << '=' << print_expr(state);
      }
      os << " | " << print_expr(c.expr) << '>';
      break;
    }
  }
  return os.str();
}

bool is_fjl_value(const ExprPtr& e) {
  return e->kind == Expr::Kind::ObjectVal || e->kind == Expr::Kind::Lambda;
}

bool is_fjo_value(const ExprPtr& e) {
  if (e->kind == Expr::Kind::BoolLit) return true;
  if (e->kind != Expr::Kind::New) return false;
  for (const ExprPtr& a : e->args)
    if (!is_fjo_value(a)) return false;
  return true;
}

// --------------------------------------------------------------------------
// MiniFJ&lambda
// --------------------------------------------------------------------------

namespace {

int table_bound(const ClassTable& ct) {
  int arity = 1;
  for (const std::string& cname : ct.class_names()) {
    arity = std::max(arity, static_cast<int>(ct.fields(cname).size()));
    for (const auto& [_, md] : ct.cls(cname).methods)
      arity = std::max(arity, static_cast<int>(md.params.size()));
  }
  return arity + 2;
}

const ExprPtr& result_expr(const Result& r) { return fj_of(r.cfg).expr; }

// var: the only premise is the continuation env(x) => env(x)
RuleState fjl_var_state(const Config& conclusion, const FjConfig& c) {
  ExprPtr value = c.env.at(c.expr->name);
  Config cont = plain_config(value);
  ScheduleFn fn = [cont](const std::vector<Judgment>&, const Result& r) -> StepDecision {
    return r.cfg == cont ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("var", conclusion, cont, std::move(fn));
}

// field-access: <env,e> => object C(vs), then v_i => v_i
RuleState fjl_field_state(TablePtr ct, const Config& conclusion, const FjConfig& c) {
  std::string field = c.expr->name;
  Config first = env_config(c.env, c.expr->recv);
  ScheduleFn fn = [ct, field](const std::vector<Judgment>& fed,
                              const Result& r) -> StepDecision {
    if (fed.empty()) {
      const ExprPtr& v = result_expr(r);
      if (v->kind != Expr::Kind::ObjectVal || !ct->has_class(v->name))
        return StepDecision::reject();
      auto idx = ct->field_index(v->name, field);
      if (!idx || *idx >= static_cast<int>(v->args.size())) return StepDecision::reject();
      return StepDecision::advance(plain_config(v->args[static_cast<size_t>(*idx)]));
    }
    // dummy continuation v_i => v_i
    const ExprPtr& obj = result_expr(fed[0].result);
    auto idx = ct->field_index(obj->name, field);
    Config expected = plain_config(obj->args[static_cast<size_t>(*idx)]);
    return r.cfg == expected ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("field-access", conclusion, first, std::move(fn));
}

// new: evaluate the arguments, conclude with the object value
RuleState fjl_new_state(const Config& conclusion, const FjConfig& c) {
  ExprPtr expr = c.expr;
  std::map<std::string, ExprPtr> env = c.env;
  size_t n = expr->args.size();
  auto premise = [env, expr, n](const std::vector<Judgment>& fed) -> Config {
    size_t k = fed.size();
    if (k < n) return env_config(env, expr->args[k]);
    std::vector<ExprPtr> vals;
    for (const Judgment& j : fed) vals.push_back(result_expr(j.result));
    return plain_config(e_object(expr->name, std::move(vals)));
  };
  ScheduleFn fn = [premise, n](const std::vector<Judgment>& fed,
                               const Result& r) -> StepDecision {
    if (fed.size() < n) {
      std::vector<Judgment> next = fed;
      next.push_back(Judgment{premise(fed), r});
      return StepDecision::advance(premise(next));
    }
    return r.cfg == premise(fed) ? StepDecision::done() : StepDecision::reject();
  };
  Config first = premise({});
  return RuleState::open("new", conclusion, first, std::move(fn));
}

// invk / lambda-invk share the receiver premise <env, e0>
RuleState fjl_invk_state(TablePtr ct, const Config& conclusion, const FjConfig& c,
                         bool lambda_branch) {
  ExprPtr expr = c.expr;
  std::map<std::string, ExprPtr> env = c.env;
  size_t n = expr->args.size();
  std::string method = expr->name;
  ScheduleFn schedule = [ct, expr, env, n, method, lambda_branch](
                            const std::vector<Judgment>& fed, const Result& r) -> StepDecision {
    size_t pos = fed.size() + 1;
    if (pos == 1) {
      const ExprPtr& v = result_expr(r);
      if (lambda_branch) {
        if (v->kind != Expr::Kind::Lambda || v->params.size() != n)
          return StepDecision::reject();
      } else {
        if (v->kind != Expr::Kind::ObjectVal || !ct->has_class(v->name))
          return StepDecision::reject();
        const MethodDef* md = ct->mbody(v->name, method);
        if (!md || md->params.size() != n) return StepDecision::reject();
      }
    }
    if (pos <= n) {
      // open argument premise `pos` (arguments accept any value)
      return StepDecision::advance(env_config(env, expr->args[pos - 1]));
    }
    if (pos == n + 1) {
      // all arguments are in; build the continuation frame
      const ExprPtr receiver = fed.empty() ? result_expr(r) : result_expr(fed[0].result);
      std::vector<ExprPtr> args;
      for (size_t i = 1; i < fed.size(); ++i) args.push_back(result_expr(fed[i].result));
      if (n > 0) args.push_back(result_expr(r));
      std::map<std::string, ExprPtr> frame;
      if (lambda_branch) {
        for (size_t i = 0; i < n; ++i) frame[receiver->params[i]] = args[i];
        return StepDecision::advance(env_config(std::move(frame), receiver->body));
      }
      const MethodDef* md = ct->mbody(receiver->name, method);
      for (size_t i = 0; i < n; ++i) frame[md->params[i]] = args[i];
      frame["this"] = receiver;
      return StepDecision::advance(env_config(std::move(frame), md->body));
    }
    return StepDecision::done();  // continuation result concludes the rule
  };
  Config first = env_config(env, expr->recv);
  return RuleState::open(lambda_branch ? "lambda-invk" : "invk", conclusion, first,
                         std::move(schedule));
}

// upcast: single continuation premise <env, e> => v
RuleState fjl_cast_state(const Config& conclusion, const FjConfig& c) {
  Config cont = env_config(c.env, c.expr->recv);
  ScheduleFn fn = [](const std::vector<Judgment>&, const Result&) -> StepDecision {
    return StepDecision::done();
  };
  return RuleState::open("upcast", conclusion, cont, std::move(fn));
}

}  // namespace

SemanticsDef fjl_semantics(TablePtr ct) {
  SemanticsDef sem;
  sem.id = "fjl";
  sem.bound = table_bound(*ct);
  sem.is_result = [](const Config& c) {
    const FjConfig& fc = fj_of(c);
    return fc.kind == FjConfig::Kind::Plain && is_fjl_value(fc.expr);
  };
  sem.open_rules = [ct](const Config& c) -> std::vector<RuleState> {
    const FjConfig& fc = fj_of(c);
    std::vector<RuleState> out;
    if (fc.kind != FjConfig::Kind::EnvExpr) return out;
    switch (fc.expr->kind) {
      case Expr::Kind::Var:
        if (fc.env.count(fc.expr->name)) out.push_back(fjl_var_state(c, fc));
        break;
      case Expr::Kind::FieldAccess:
        out.push_back(fjl_field_state(ct, c, fc));
        break;
      case Expr::Kind::New:
        out.push_back(fjl_new_state(c, fc));
        break;
      case Expr::Kind::Invoke:
        out.push_back(fjl_invk_state(ct, c, fc, false));
        out.push_back(fjl_invk_state(ct, c, fc, true));
        break;
      case Expr::Kind::Cast:
        out.push_back(fjl_cast_state(c, fc));
        break;
      default:
        break;
    }
    return out;
  };
  return sem;
}

// --------------------------------------------------------------------------
// MiniFJ&O
// --------------------------------------------------------------------------

namespace {

RuleState fjo_field_state(TablePtr ct, const Config& conclusion, const ExprPtr& expr) {
  std::string field = expr->name;
  Config first = plain_config(expr->recv);
  ScheduleFn fn = [ct, field](const std::vector<Judgment>& fed,
                              const Result& r) -> StepDecision {
    if (fed.empty()) {
      const ExprPtr& v = result_expr(r);
      if (v->kind != Expr::Kind::New || !ct->has_class(v->name)) return StepDecision::reject();
      auto idx = ct->field_index(v->name, field);
      if (!idx || *idx >= static_cast<int>(v->args.size())) return StepDecision::reject();
      return StepDecision::advance(plain_config(v->args[static_cast<size_t>(*idx)]));
    }
    const ExprPtr& obj = result_expr(fed[0].result);
    auto idx = ct->field_index(obj->name, field);
    Config expected = plain_config(obj->args[static_cast<size_t>(*idx)]);
    return r.cfg == expected ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("field-access", conclusion, first, std::move(fn));
}

RuleState fjo_new_state(const Config& conclusion, const ExprPtr& expr) {
  size_t n = expr->args.size();
  auto premise = [expr, n](const std::vector<Judgment>& fed) -> Config {
    size_t k = fed.size();
    if (k < n) return plain_config(expr->args[k]);
    std::vector<ExprPtr> vals;
    for (const Judgment& j : fed) vals.push_back(result_expr(j.result));
    return plain_config(e_new(expr->name, std::move(vals)));
  };
  ScheduleFn fn = [premise, n](const std::vector<Judgment>& fed,
                               const Result& r) -> StepDecision {
    if (fed.size() < n) {
      std::vector<Judgment> next = fed;
      next.push_back(Judgment{premise(fed), r});
      return StepDecision::advance(premise(next));
    }
    return r.cfg == premise(fed) ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("new", conclusion, premise({}), std::move(fn));
}

RuleState fjo_invk_state(TablePtr ct, const Config& conclusion, const ExprPtr& expr) {
  size_t n = expr->args.size();
  std::string method = expr->name;
  ScheduleFn fn = [ct, expr, n, method](const std::vector<Judgment>& fed,
                                        const Result& r) -> StepDecision {
    size_t pos = fed.size() + 1;
    if (pos == 1) {
      const ExprPtr& v = result_expr(r);
      if (v->kind != Expr::Kind::New || !ct->has_class(v->name)) return StepDecision::reject();
      const MethodDef* md = ct->mbody(v->name, method);
      if (!md || md->params.size() != n) return StepDecision::reject();
    }
    if (pos <= n) return StepDecision::advance(plain_config(expr->args[pos - 1]));
    if (pos == n + 1) {
      const ExprPtr receiver = fed.empty() ? result_expr(r) : result_expr(fed[0].result);
      const MethodDef* md = ct->mbody(receiver->name, method);
      std::map<std::string, ExprPtr> sub;
      for (size_t i = 0; i < n; ++i) {
        const ExprPtr arg =
            i + 1 < fed.size() ? result_expr(fed[i + 1].result) : result_expr(r);
        sub[md->params[i]] = arg;
      }
      sub["this"] = receiver;
      return StepDecision::advance(plain_config(substitute(md->body, sub)));
    }
    return StepDecision::done();
  };
  return RuleState::open("invk", conclusion, plain_config(expr->recv), std::move(fn));
}

RuleState fjo_if_state(const Config& conclusion, const ExprPtr& expr, bool branch) {
  ScheduleFn fn = [expr, branch](const std::vector<Judgment>& fed,
                                 const Result& r) -> StepDecision {
    if (fed.empty()) {
      const ExprPtr& v = result_expr(r);
      if (v->kind != Expr::Kind::BoolLit || v->bval != branch) return StepDecision::reject();
      return StepDecision::advance(plain_config(branch ? expr->body : expr->alt));
    }
    return StepDecision::done();
  };
  return RuleState::open(branch ? "if/true" : "if/false", conclusion, plain_config(expr->recv),
                         std::move(fn));
}

}  // namespace

SemanticsDef fjo_semantics(TablePtr ct) {
  SemanticsDef sem;
  sem.id = "fjo";
  sem.bound = table_bound(*ct);
  sem.is_result = [](const Config& c) {
    const FjConfig& fc = fj_of(c);
    return fc.kind == FjConfig::Kind::Plain && is_fjo_value(fc.expr);
  };
  sem.open_rules = [ct](const Config& c) -> std::vector<RuleState> {
    const FjConfig& fc = fj_of(c);
    std::vector<RuleState> out;
    if (fc.kind != FjConfig::Kind::Plain) return out;
    switch (fc.expr->kind) {
      case Expr::Kind::FieldAccess:
        out.push_back(fjo_field_state(ct, c, fc.expr));
        break;
      case Expr::Kind::New:
        if (!is_fjo_value(fc.expr)) out.push_back(fjo_new_state(c, fc.expr));
        break;
      case Expr::Kind::Invoke:
        out.push_back(fjo_invk_state(ct, c, fc.expr));
        break;
      case Expr::Kind::If:
        out.push_back(fjo_if_state(c, fc.expr, true));
        out.push_back(fjo_if_state(c, fc.expr, false));
        break;
      default:
        break;
    }
    return out;
  };
  return sem;
}

// --------------------------------------------------------------------------
// Imperative FJ
// --------------------------------------------------------------------------

namespace {

bool is_fji_result(const FjConfig& fc) {
  return fc.kind == FjConfig::Kind::MemExpr && fc.expr->kind == Expr::Kind::ObjectId &&
         fc.memory.count(fc.expr->oid) > 0;
}

long fresh_oid(const std::map<long, ExprPtr>& memory) {
  return memory.empty() ? 0 : memory.rbegin()->first + 1;
}

// accepts any result configuration <mu', iota>
bool fji_result_shape(const Result& r) { return is_fji_result(fj_of(r.cfg)); }

RuleState fji_field_state(TablePtr ct, const Config& conclusion, const FjConfig& c) {
  std::string field = c.expr->name;
  Config first = mem_config(c.memory, c.expr->recv);
  ScheduleFn fn = [ct, field](const std::vector<Judgment>& fed,
                              const Result& r) -> StepDecision {
    if (fed.empty()) {
      if (!fji_result_shape(r)) return StepDecision::reject();
      const FjConfig& rc = fj_of(r.cfg);
      const ExprPtr& state = rc.memory.at(rc.expr->oid);
      auto idx = ct->field_index(state->name, field);
      if (!idx || *idx >= static_cast<int>(state->args.size())) return StepDecision::reject();
      return StepDecision::advance(
          mem_config(rc.memory, state->args[static_cast<size_t>(*idx)]));
    }
    const FjConfig& rc = fj_of(fed[0].result.cfg);
    const ExprPtr& state = rc.memory.at(rc.expr->oid);
    auto idx = ct->field_index(state->name, field);
    Config expected = mem_config(rc.memory, state->args[static_cast<size_t>(*idx)]);
    return r.cfg == expected ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("field-access", conclusion, first, std::move(fn));
}

RuleState fji_new_state(const Config& conclusion, const FjConfig& c) {
  ExprPtr expr = c.expr;
  size_t n = expr->args.size();
  std::map<long, ExprPtr> mem0 = c.memory;
  auto allocate = [expr, n, mem0](const std::vector<Judgment>& fed,
                                  const Result* last) -> Config {
    std::map<long, ExprPtr> mem = n == 0 ? mem0 : fj_of(last->cfg).memory;
    std::vector<ExprPtr> ids;
    for (const Judgment& j : fed) ids.push_back(fj_of(j.result.cfg).expr);
    if (last && n > 0) ids.push_back(fj_of(last->cfg).expr);
    long fresh = fresh_oid(mem);
    mem[fresh] = e_new(expr->name, std::move(ids));
    return mem_config(std::move(mem), e_oid(fresh));
  };
  ScheduleFn fn = [expr, n, allocate](const std::vector<Judgment>& fed,
                                      const Result& r) -> StepDecision {
    size_t pos = fed.size() + 1;
    if (pos <= n) {
      if (!fji_result_shape(r)) return StepDecision::reject();
      const FjConfig& rc = fj_of(r.cfg);
      if (pos < n) return StepDecision::advance(mem_config(rc.memory, expr->args[pos]));
      return StepDecision::advance(allocate(fed, &r));  // all arguments in: allocate
    }
    // dummy continuation <mu', iota> => itself
    std::vector<Judgment> args(fed.begin(), fed.end());
    if (n > 0) args.pop_back();
    const Result* last = n > 0 ? &fed.back().result : nullptr;
    Config expected = allocate(args, last);
    return r.cfg == expected ? StepDecision::done() : StepDecision::reject();
  };
  Config first;
  if (n == 0) {
    std::map<long, ExprPtr> mem = mem0;
    long fresh = fresh_oid(mem);
    mem[fresh] = e_new(expr->name, {});
    first = mem_config(std::move(mem), e_oid(fresh));
  } else {
    first = mem_config(mem0, expr->args[0]);
  }
  return RuleState::open("new", conclusion, first, std::move(fn));
}

RuleState fji_invk_state(TablePtr ct, const Config& conclusion, const FjConfig& c) {
  ExprPtr expr = c.expr;
  size_t n = expr->args.size();
  std::string method = expr->name;
  ScheduleFn fn = [ct, expr, n, method](const std::vector<Judgment>& fed,
                                        const Result& r) -> StepDecision {
    size_t pos = fed.size() + 1;
    if (pos <= n + 1) {
      if (!fji_result_shape(r)) return StepDecision::reject();
      const FjConfig& rc = fj_of(r.cfg);
      if (pos == 1) {
        // the receiver's class is read in the memory right after premise 0
        const ExprPtr& state = rc.memory.at(rc.expr->oid);
        const MethodDef* md = ct->mbody(state->name, method);
        if (!md || md->params.size() != n) return StepDecision::reject();
      }
      if (pos <= n) return StepDecision::advance(mem_config(rc.memory, expr->args[pos - 1]));
      // continuation: substitute ids into the body
      const FjConfig& recv_rc = fj_of(fed.empty() ? r.cfg : fed[0].result.cfg);
      const ExprPtr& state = recv_rc.memory.at(recv_rc.expr->oid);
      const MethodDef* md = ct->mbody(state->name, method);
      std::map<std::string, ExprPtr> sub;
      for (size_t i = 0; i < n; ++i) {
        const Result& arg = i + 1 < fed.size() ? fed[i + 1].result : r;
        sub[md->params[i]] = fj_of(arg.cfg).expr;
      }
      sub["this"] = recv_rc.expr;
      return StepDecision::advance(mem_config(rc.memory, substitute(md->body, sub)));
    }
    return fji_result_shape(r) ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("invk", conclusion, mem_config(c.memory, expr->recv), std::move(fn));
}

RuleState fji_assign_state(TablePtr ct, const Config& conclusion, const FjConfig& c) {
  ExprPtr expr = c.expr;
  std::string field = expr->name;
  ScheduleFn fn = [ct, expr, field](const std::vector<Judgment>& fed,
                                    const Result& r) -> StepDecision {
    size_t pos = fed.size() + 1;
    if (pos == 1) {
      if (!fji_result_shape(r)) return StepDecision::reject();
      const FjConfig& rc = fj_of(r.cfg);
      const ExprPtr& state = rc.memory.at(rc.expr->oid);
      auto idx = ct->field_index(state->name, field);
      if (!idx || *idx >= static_cast<int>(state->args.size())) return StepDecision::reject();
      return StepDecision::advance(mem_config(rc.memory, expr->body));
    }
    if (pos == 2) {
      if (!fji_result_shape(r)) return StepDecision::reject();
      const FjConfig& lhs = fj_of(fed[0].result.cfg);
      const FjConfig& rhs = fj_of(r.cfg);
      long target = lhs.expr->oid;
      // the update is undefined unless the assigned object is in the memory
      if (rhs.memory.count(target) == 0) return StepDecision::reject();
      std::map<long, ExprPtr> mem = rhs.memory;
      const ExprPtr& state = mem.at(target);
      auto idx = ct->field_index(state->name, field);
      if (!idx || *idx >= static_cast<int>(state->args.size())) return StepDecision::reject();
      std::vector<ExprPtr> ids = state->args;
      ids[static_cast<size_t>(*idx)] = rhs.expr;
      mem[target] = e_new(state->name, std::move(ids));
      return StepDecision::advance(mem_config(std::move(mem), rhs.expr));
    }
    // dummy continuation: the updated memory with the assigned id
    const FjConfig& lhs = fj_of(fed[0].result.cfg);
    const FjConfig& rhs = fj_of(fed[1].result.cfg);
    long target = lhs.expr->oid;
    std::map<long, ExprPtr> mem = rhs.memory;
    const ExprPtr& state = mem.at(target);
    auto idx = ct->field_index(state->name, field);
    std::vector<ExprPtr> ids = state->args;
    ids[static_cast<size_t>(*idx)] = rhs.expr;
    mem[target] = e_new(state->name, std::move(ids));
    Config expected = mem_config(std::move(mem), rhs.expr);
    return r.cfg == expected ? StepDecision::done() : StepDecision::reject();
  };
  return RuleState::open("field-assign", conclusion, mem_config(c.memory, expr->recv),
                         std::move(fn));
}

}  // namespace

SemanticsDef fji_semantics(TablePtr ct) {
  SemanticsDef sem;
  sem.id = "fji";
  sem.bound = table_bound(*ct) + 1;  // the receiver premise precedes the arguments
  sem.is_result = [](const Config& c) { return is_fji_result(fj_of(c)); };
  sem.open_rules = [ct](const Config& c) -> std::vector<RuleState> {
    const FjConfig& fc = fj_of(c);
    std::vector<RuleState> out;
    if (fc.kind != FjConfig::Kind::MemExpr) return out;
    switch (fc.expr->kind) {
      case Expr::Kind::FieldAccess:
        out.push_back(fji_field_state(ct, c, fc));
        break;
      case Expr::Kind::New:
        out.push_back(fji_new_state(c, fc));
        break;
      case Expr::Kind::Invoke:
        out.push_back(fji_invk_state(ct, c, fc));
        break;
      case Expr::Kind::FieldAssign:
        out.push_back(fji_assign_state(ct, c, fc));
        break;
      default:
        break;
    }
    return out;
  };
  return sem;
}

}  // namespace bsw::fj
