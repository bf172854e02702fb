// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bsw/config.hpp"

namespace bsw {

// What a rule schedule decides when offered a result for its pending premise.
struct StepDecision {
  enum class Kind { Reject, Next, Done };
  Kind kind = Kind::Reject;
  Config next;  // set when kind == Next: configuration of the following premise

  static StepDecision reject() { return {Kind::Reject, {}}; }
  static StepDecision advance(Config c) { return {Kind::Next, std::move(c)}; }
  static StepDecision done() { return {Kind::Done, {}}; }
};

class RuleState;

/// Decides, given the premises realized so far and a candidate result for the
/// pending premise, whether some rule of this schedule's meta-rule branch
/// accepts it, and if so what comes next. Must be pure.
using ScheduleFn =
    std::function<StepDecision(const std::vector<Judgment>& fed, const Result& r)>;

/// The live schedule of one rule: a meta-rule branch consumed left to right.
/// Immutable; feeding produces a fresh state.
class RuleState {
 public:
  RuleState(std::string rule_id, Config conclusion, std::vector<Judgment> fed,
            Config current, ScheduleFn schedule)
      : rule_id_(std::move(rule_id)),
        conclusion_(std::move(conclusion)),
        fed_(std::move(fed)),
        current_(std::move(current)),
        schedule_(std::move(schedule)) {}

  static RuleState open(std::string rule_id, Config conclusion, Config first_premise,
                        ScheduleFn schedule) {
    return RuleState(std::move(rule_id), std::move(conclusion), {}, std::move(first_premise),
                     std::move(schedule));
  }

  const std::string& rule_id() const { return rule_id_; }
  const Config& conclusion() const { return conclusion_; }
  const std::vector<Judgment>& fed() const { return fed_; }
  // Configuration of the premise currently awaiting a result.
  const Config& current() const { return current_; }
  // 1-based index of the pending premise.
  int position() const { return static_cast<int>(fed_.size()) + 1; }

  const ScheduleFn& schedule() const { return schedule_; }

 private:
  std::string rule_id_;
  Config conclusion_;
  std::vector<Judgment> fed_;
  Config current_;
  ScheduleFn schedule_;
};

struct FeedOutcome {
  enum class Kind { Rejected, Continue, Concluded };
  Kind kind = Kind::Rejected;
  std::optional<RuleState> next;     // Continue
  std::optional<Result> conclusion;  // Concluded; always the result just fed

  bool rejected() const { return kind == Kind::Rejected; }
  bool continued() const { return kind == Kind::Continue; }
  bool concluded() const { return kind == Kind::Concluded; }
};

/// A pluggable big-step semantics in rule shape: result test, per-configuration
/// rule schedulers, and the uniform premise bound b (condition BP).
struct SemanticsDef {
  std::string id;
  std::function<bool(const Config&)> is_result;
  // Defined on non-result configurations; may return an empty list.
  std::function<std::vector<RuleState>(const Config&)> open_rules;
  int bound = 0;
};

/// Feeds result r for the pending premise of `state`. Rejected is a value, not
/// an error: it means no rule sharing this state's realized prefix accepts r
/// at this position.
FeedOutcome feed(const RuleState& state, const Result& r);

/// A reified rule: conclusion configuration plus materialized premises.
struct RuleInstance {
  std::string rule_id;  // diagnostics only
  Config config;
  std::vector<Judgment> premises;  // length n+1 >= 1

  int arity() const { return static_cast<int>(premises.size()); }
};

/// Equality up to index i (1-based): same conclusion configuration, identical
/// premises below i, and equal i-th premise configurations.
bool sim_upto(const RuleInstance& a, const RuleInstance& b, int i);

/// Replays `inst`'s first k-1 premises through open_rules and returns the
/// schedules that accept exactly that prefix and whose pending premise
/// configuration matches premise k. With k == arity()+1 the returned states
/// are those still pending after the whole premise list (normally none for a
/// faithfully materialized instance whose last feed concluded); the common use
/// is 1 <= k <= arity().
std::vector<RuleState> replay_prefix(const SemanticsDef& sem, const RuleInstance& inst, int k);

/// True when premises replayed through some schedule of open_rules(config)
/// reproduce the instance and end Concluded.
bool replays_exactly(const SemanticsDef& sem, const RuleInstance& inst);

}  // namespace bsw
