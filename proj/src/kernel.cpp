// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/kernel.hpp"

namespace bsw {

FeedOutcome feed(const RuleState& state, const Result& r) {
  StepDecision d = state.schedule()(state.fed(), r);
  FeedOutcome out;
  switch (d.kind) {
    case StepDecision::Kind::Reject:
      out.kind = FeedOutcome::Kind::Rejected;
      break;
    case StepDecision::Kind::Next: {
      std::vector<Judgment> fed = state.fed();
      fed.push_back(Judgment{state.current(), r});
      out.kind = FeedOutcome::Kind::Continue;
      out.next = RuleState(state.rule_id(), state.conclusion(), std::move(fed), d.next,
                           state.schedule());
      break;
    }
    case StepDecision::Kind::Done:
      // The continuation's result is the rule's result.
      out.kind = FeedOutcome::Kind::Concluded;
      out.conclusion = r;
      break;
  }
  return out;
}

bool sim_upto(const RuleInstance& a, const RuleInstance& b, int i) {
  if (i < 1 || i > std::min(a.arity(), b.arity()))
    throw std::out_of_range("sim_upto: index out of range");
  if (a.config != b.config) return false;
  for (int k = 0; k + 1 < i; ++k)
    if (a.premises[k] != b.premises[k]) return false;
  return a.premises[i - 1].config == b.premises[i - 1].config;
}

std::vector<RuleState> replay_prefix(const SemanticsDef& sem, const RuleInstance& inst, int k) {
  if (k < 1 || k > inst.arity() + 1)
    throw std::out_of_range("replay_prefix: index out of range");
  std::vector<RuleState> bundle;
  for (RuleState st : sem.open_rules(inst.config)) {
    if (st.current() != inst.premises[0].config) continue;
    bundle.push_back(std::move(st));
  }
  for (int h = 1; h < k; ++h) {
    std::vector<RuleState> survivors;
    for (const RuleState& st : bundle) {
      FeedOutcome out = feed(st, inst.premises[h - 1].result);
      if (!out.continued()) continue;
      // Only schedules realizing exactly this premise list stay in the bundle.
      if (h < inst.arity() && out.next->current() != inst.premises[h].config) continue;
      if (h == inst.arity()) continue;  // instance ended but the schedule wants more
      survivors.push_back(std::move(*out.next));
    }
    bundle = std::move(survivors);
  }
  return bundle;
}

bool replays_exactly(const SemanticsDef& sem, const RuleInstance& inst) {
  if (inst.arity() == 0) return false;
  std::vector<RuleState> bundle = replay_prefix(sem, inst, inst.arity());
  for (const RuleState& st : bundle) {
    FeedOutcome out = feed(st, inst.premises.back().result);
    if (out.concluded()) return true;
  }
  return false;
}

}  // namespace bsw
