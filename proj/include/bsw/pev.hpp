// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bsw/kernel.hpp"

namespace bsw {

/// A finite approximated proof tree. A node without an outcome is an Unknown
/// judgment c => ?. The bundle holds the schedules still compatible with the
/// realized children; it is empty at result-axiom leaves and completed nodes.
struct PartialTree {
  using Ptr = std::shared_ptr<const PartialTree>;

  Config config;
  std::optional<Result> outcome;  // nullopt encodes Unknown
  std::vector<Ptr> children;
  // Shared so that rebuilding the spine on every step stays cheap.
  std::shared_ptr<const std::vector<RuleState>> bundle;

  bool unknown() const { return !outcome.has_value(); }
  const std::vector<RuleState>& bundle_states() const {
    static const std::vector<RuleState> kEmpty;
    return bundle ? *bundle : kEmpty;
  }
};

using TreePtr = PartialTree::Ptr;

TreePtr init_tree(const SemanticsDef& sem, const Config& c);

bool is_complete(const TreePtr& t);

/// The approximation order: b extends a by adding branches or resolving
/// Unknowns; completed subtrees must match exactly.
bool tree_leq(const TreePtr& a, const TreePtr& b);
bool tree_identical(const TreePtr& a, const TreePtr& b);

// Structural sanity: upward Unknown propagation, at most one Unknown per
// level, result-rooted nodes complete, completed prefix before the Unknown
// child. Returns an explanation for the first violated invariant.
std::optional<std::string> tree_invariant_violation(const TreePtr& t);

std::string render_tree(const TreePtr& t);

/// One applicable reduction at the unique active (deepest Unknown) node.
struct StepOption {
  enum class Schema { Axiom, OpenFirst, OpenNext, Conclude };
  Schema schema;
  std::string rule_id;            // representative schedule of the group
  std::optional<Config> opens;    // OpenFirst/OpenNext
  std::optional<Result> result;   // Conclude (and the fed result for OpenNext)
};

const char* schema_name(StepOption::Schema s);

/// All reductions applicable to t, ordered deterministically with Conclude
/// first. Empty means t is irreducible (complete or stuck).
std::vector<StepOption> step_options(const SemanticsDef& sem, const TreePtr& t);

struct StepEvent {
  std::string schema;
  std::vector<int> address;  // child indices from the root to the acted node
  std::string rule_id;
  std::optional<Config> opened;
  std::optional<Result> fed;
};

TreePtr apply_option(const SemanticsDef& sem, const TreePtr& t, const StepOption& opt,
                     StepEvent* event = nullptr);

struct StepResult {
  TreePtr next;
  StepEvent event;
};

struct Strategy {
  enum class Kind { First, Random, All };
  Kind kind = Kind::First;
  std::uint64_t seed = 0;
  int branch_budget = 4096;  // All: maximum explored paths

  static Strategy first() { return {Kind::First, 0, 0}; }
  static Strategy random(std::uint64_t seed) { return {Kind::Random, seed, 0}; }
  static Strategy all(int budget = 4096) { return {Kind::All, 0, budget}; }
};

Strategy parse_strategy(const std::string& name, std::uint64_t seed, int budget = 4096);

/// Applies one reduction under the strategy's choice, or nothing when t is
/// irreducible (complete or stuck). Random draws are seeded per call.
std::optional<StepResult> step(const SemanticsDef& sem, const TreePtr& t, Strategy s);

struct RunOutcome {
  enum class Kind { Converged, Stuck, Exhausted };
  Kind kind;
  std::optional<Result> result;  // Converged
  TreePtr tree;
  long steps = 0;
  std::vector<StepEvent> events;  // populated when event logging is on
};

struct RunObserver {
  virtual ~RunObserver() = default;
  virtual void on_step(const TreePtr& before, const StepEvent& ev, const TreePtr& after) = 0;
};

struct RunOptions {
  bool log_events = false;
  RunObserver* observer = nullptr;
  // Optional override of the nondeterministic choice; takes the active node's
  // configuration and the options, returns the index to apply.
  std::function<int(const Config&, const std::vector<StepOption>&)> choose;
};

/// Iterates the reduction at most fuel times under a single-path strategy
/// (First or Random) and classifies the final tree.
RunOutcome run(const SemanticsDef& sem, const Config& c, long fuel, Strategy s,
               const RunOptions& opts = {});

/// Exhaustive exploration of the nondeterministic choice points.
struct AllOutcomes {
  std::map<Result, RunOutcome> converged;
  std::optional<RunOutcome> stuck;      // a representative stuck path
  std::optional<RunOutcome> exhausted;  // a representative exhausted path
  long paths = 0;
  bool budget_hit = false;

  std::set<Result> converged_results() const;
  bool any_stuck() const { return stuck.has_value(); }
  bool any_exhausted() const { return exhausted.has_value(); }
};

AllOutcomes run_all(const SemanticsDef& sem, const Config& c, long fuel, int branch_budget,
                    const RunOptions& opts = {});

/// Exhaustive classification of every reduction path, computed with per-
/// configuration memoization. Fuel bounds the evaluation depth of each
/// subproblem (path enumeration is exponential under choice inside
/// recursion); converged results at fuel F coincide with the reference
/// evaluator's results at derivation height F.
struct AllSummary {
  std::set<Result> results;
  bool stuck = false;
  bool exhausted = false;
};

class AllClassifier {
 public:
  explicit AllClassifier(SemanticsDef sem) : sem_(std::move(sem)) {}

  AllSummary classify(const Config& c, int fuel);

 private:
  SemanticsDef sem_;
  std::map<std::pair<std::string, int>, AllSummary> memo_;
  bool deep_ = false;
};

}  // namespace bsw
