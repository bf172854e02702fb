// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "bsw/kernel.hpp"
#include "bsw/pev.hpp"

namespace bsw {

/// Reconstructs which family of derived rules produced the Wrong: the axiom
/// for conclusion-less configurations, an introduction wrong(rho,i,r), or a
/// propagation prop(rho,i,wrong).
struct WrongEvidence {
  enum class Kind { NoRule, AllReject, Propagated };
  Kind kind;
  Config config;                    // NoRule/AllReject: the rejecting conclusion;
                                    // Propagated: the child configuration gone wrong
  int premise = 0;                  // AllReject: 1-based premise index
  std::optional<Result> offending;  // AllReject: the refused result

  std::string describe() const;
};

struct WrongOutcome {
  enum class Kind { Value, Wrong, Exhausted };
  Kind kind;
  std::optional<Result> value;
  std::optional<WrongEvidence> evidence;

  bool is_value() const { return kind == Kind::Value; }
  bool is_wrong() const { return kind == Kind::Wrong; }
  bool is_exhausted() const { return kind == Kind::Exhausted; }
};

/// Derived Wrong-extended evaluation: a result, Wrong with evidence, or fuel
/// exhaustion. Fuel accounting mirrors the tree-reduction step budget so the
/// two classifiers are comparable.
WrongOutcome eval_wrong(const SemanticsDef& sem, const Config& c, long fuel, Strategy s);

struct WrongAllOutcomes {
  std::map<Result, WrongOutcome> values;
  std::optional<WrongOutcome> wrong;      // a representative Wrong path
  std::optional<WrongOutcome> exhausted;  // a representative exhausted path
  bool budget_hit = false;

  std::set<Result> value_results() const;
  bool any_wrong() const { return wrong.has_value(); }
  bool any_exhausted() const { return exhausted.has_value(); }
};

WrongAllOutcomes eval_wrong_all(const SemanticsDef& sem, const Config& c, long fuel,
                                int branch_budget = 4096);

/// Memoized exhaustive Wrong classification; fuel bounds the evaluation depth
/// of each subproblem, matching the tree-reduction classifier's regime.
struct WrongSummary {
  std::set<Result> values;
  bool wrong = false;
  bool exhausted = false;
  std::optional<WrongEvidence> evidence;  // first Wrong seen
};

class WrongClassifier {
 public:
  explicit WrongClassifier(SemanticsDef sem) : sem_(std::move(sem)) {}

  WrongSummary classify(const Config& c, int fuel);

 private:
  SemanticsDef sem_;
  std::map<std::pair<std::string, int>, WrongSummary> memo_;
  bool deep_ = false;
};

}  // namespace bsw
