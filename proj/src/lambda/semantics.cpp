// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/lambda/semantics.hpp"

namespace bsw::lam {

namespace {

const Expr& expr_of_result(const Result& r) { return r.cfg.payload<Expr>(); }

// app: <e1 => fun x.e  e2 => v2 | e[v2/x] => v | e1 e2>
RuleState app_state(const Config& conclusion, const ExprPtr& e1, const ExprPtr& e2) {
  ScheduleFn fn = [e2](const std::vector<Judgment>& fed, const Result& r) -> StepDecision {
    switch (fed.size()) {
      case 0: {
        const Expr& v = expr_of_result(r);
        if (v.kind != Expr::Kind::Abs) return StepDecision::reject();
        return StepDecision::advance(to_config(e2));
      }
      case 1: {
        ExprPtr abs = fed[0].result.cfg.payload_ptr<Expr>();
        ExprPtr v2 = r.cfg.payload_ptr<Expr>();
        return StepDecision::advance(to_config(substitute(abs->body, abs->name, v2)));
      }
      default:
        return StepDecision::done();
    }
  };
  return RuleState::open("app", conclusion, to_config(e1), std::move(fn));
}

// succ: <e => n | n+1 => n+1 | succ e>
RuleState succ_state(const Config& conclusion, const ExprPtr& e) {
  ScheduleFn fn = [](const std::vector<Judgment>& fed, const Result& r) -> StepDecision {
    if (fed.empty()) {
      const Expr& v = expr_of_result(r);
      if (v.kind != Expr::Kind::Const) return StepDecision::reject();
      return StepDecision::advance(to_config(e_const(v.value + 1)));
    }
    // dummy continuation n+1 => n+1
    const Expr& v = expr_of_result(r);
    long n = fed[0].result.cfg.payload<Expr>().value;
    if (v.kind == Expr::Kind::Const && v.value == n + 1) return StepDecision::done();
    return StepDecision::reject();
  };
  return RuleState::open("succ", conclusion, to_config(e), std::move(fn));
}

// choice: <eps | e_i => v | e1 (+) e2>, i = 1,2
RuleState choice_state(const Config& conclusion, const ExprPtr& branch, int i) {
  ScheduleFn fn = [](const std::vector<Judgment>&, const Result&) -> StepDecision {
    return StepDecision::done();
  };
  return RuleState::open(i == 1 ? "choice/1" : "choice/2", conclusion, to_config(branch),
                         std::move(fn));
}

// plus: <e1 => n1  e2 => n2 | n1+n2 => n1+n2 | + e1 e2>
RuleState plus_state(const Config& conclusion, const ExprPtr& e1, const ExprPtr& e2) {
  ScheduleFn fn = [e2](const std::vector<Judgment>& fed, const Result& r) -> StepDecision {
    switch (fed.size()) {
      case 0: {
        if (expr_of_result(r).kind != Expr::Kind::Const) return StepDecision::reject();
        return StepDecision::advance(to_config(e2));
      }
      case 1: {
        if (expr_of_result(r).kind != Expr::Kind::Const) return StepDecision::reject();
        long n1 = fed[0].result.cfg.payload<Expr>().value;
        long n2 = expr_of_result(r).value;
        return StepDecision::advance(to_config(e_const(n1 + n2)));
      }
      default: {
        const Expr& v = expr_of_result(r);
        long sum = fed[0].result.cfg.payload<Expr>().value + fed[1].result.cfg.payload<Expr>().value;
        if (v.kind == Expr::Kind::Const && v.value == sum) return StepDecision::done();
        return StepDecision::reject();
      }
    }
  };
  return RuleState::open("plus", conclusion, to_config(e1), std::move(fn));
}

}  // namespace

SemanticsDef lam_semantics(SemanticsOptions opts) {
  SemanticsDef sem;
  sem.id = opts.with_plus ? "lam-arith" : (opts.with_succ ? "lam" : "lam-no-succ");
  sem.bound = 4;
  sem.is_result = [](const Config& c) { return is_value(c.payload<Expr>()); };
  sem.open_rules = [opts](const Config& c) -> std::vector<RuleState> {
    ExprPtr e = expr_of(c);
    std::vector<RuleState> states;
    switch (e->kind) {
      case Expr::Kind::App:
        states.push_back(app_state(c, e->left, e->right));
        break;
      case Expr::Kind::Succ:
        if (opts.with_succ) states.push_back(succ_state(c, e->body));
        break;
      case Expr::Kind::Choice:
        states.push_back(choice_state(c, e->left, 1));
        states.push_back(choice_state(c, e->right, 2));
        break;
      case Expr::Kind::Plus:
        if (opts.with_plus) states.push_back(plus_state(c, e->left, e->right));
        break;
      default:
        break;  // variables are never the conclusion of a rule
    }
    return states;
  };
  return sem;
}

}  // namespace bsw::lam
