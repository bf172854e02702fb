// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bsw/evaluator.hpp"
#include "bsw/kernel.hpp"
#include "bsw/pev.hpp"
#include "bsw/wrong.hpp"

namespace bsw {

/// An opaque index of the checked predicate family (typically a type).
/// Identity goes through the canonical text form, like Config.
class PredicateIndex {
 public:
  PredicateIndex() = default;

  template <typename T>
  static PredicateIndex make(std::shared_ptr<const T> payload, std::string text) {
    PredicateIndex i;
    i.payload_ = std::static_pointer_cast<const void>(std::move(payload));
    i.text_ = std::move(text);
    return i;
  }

  const std::string& text() const { return text_; }

  template <typename T>
  const T& payload() const {
    return *static_cast<const T*>(payload_.get());
  }
  template <typename T>
  std::shared_ptr<const T> payload_ptr() const {
    return std::static_pointer_cast<const T>(payload_);
  }

  friend bool operator==(const PredicateIndex& a, const PredicateIndex& b) {
    return a.text_ == b.text_;
  }
  friend bool operator!=(const PredicateIndex& a, const PredicateIndex& b) {
    return a.text_ != b.text_;
  }
  friend bool operator<(const PredicateIndex& a, const PredicateIndex& b) {
    return a.text_ < b.text_;
  }

 private:
  std::shared_ptr<const void> payload_;
  std::string text_;
};

/// The pluggable indexed predicate family (P_i).
struct IndexedPredicate {
  std::string id;
  std::function<bool(const PredicateIndex&, const Config&)> holds;
  // Candidate indexes worth testing against a configuration.
  std::function<std::vector<PredicateIndex>(const Config&)> index_universe;
  // Optional per-rule witness oracle for local preservation: given an
  // instance and the conclusion index, produces indexes for all premises
  // (the last one equal to the conclusion index), or nullopt to fall back
  // to the index-universe search.
  std::function<std::optional<std::vector<PredicateIndex>>(const RuleInstance&,
                                                           const PredicateIndex&)>
      s1_oracle;
  // Surfaced in suite reports (e.g. how the type-assignment index threads).
  std::string report_note;
};

struct Counterexample {
  std::string config;  // printed configuration or instance conclusion
  std::string index;
  std::string rule_id;
  int premise = 0;  // 1-based, 0 when not premise-specific
  std::string note;

  friend bool operator<(const Counterexample& a, const Counterexample& b) {
    return std::tie(a.config, a.index, a.rule_id, a.premise, a.note) <
           std::tie(b.config, b.index, b.rule_id, b.premise, b.note);
  }
};

struct CheckResult {
  enum class Status { Pass, Fail, Inconclusive };
  Status status = Status::Pass;
  std::optional<Counterexample> counterexample;  // always present on Fail
  std::string note;

  bool passed() const { return status == Status::Pass; }
  bool failed() const { return status == Status::Fail; }

  static CheckResult pass() { return {}; }
  static CheckResult fail(Counterexample cex) {
    return {Status::Fail, std::move(cex), ""};
  }
  static CheckResult inconclusive(std::string note) {
    return {Status::Inconclusive, std::nullopt, std::move(note)};
  }
};

struct Bounds {
  int eval_depth = 64;
  int result_pool_size = 32;  // extra (possibly underivable) results fed to schedules
  int instance_count = 64;    // cap on materialized instances per configuration
  std::uint64_t random_seed = 0;
  long fuel = 10000;  // end-to-end stuck/wrong probes
};

// --- Per-condition checkers -------------------------------------------------

/// S1, local preservation, on one rule instance at one conclusion index.
/// Witnesses come from the predicate's s1_oracle when it yields them, else
/// from a backtracking search over the index universe.
CheckResult check_local_preservation(const SemanticsDef& sem, const IndexedPredicate& P,
                                     const RuleInstance& inst, const PredicateIndex& idx,
                                     const Bounds& b);

/// S2, exists-progress: a predicate-satisfying non-result configuration is the
/// conclusion of some rule.
CheckResult check_exists_progress(const SemanticsDef& sem, const IndexedPredicate& P,
                                  const Config& c);

/// S3, forall-progress: every derivable result of a premise configuration is
/// accepted by some rule sharing the realized prefix.
CheckResult check_forall_progress(const SemanticsDef& sem, const IndexedPredicate& P,
                                  const RuleInstance& inst, const Bounds& b);

/// S4, progress-may: some schedule either completes on derivable premises or
/// reaches a first non-derivable premise that itself does not converge.
CheckResult check_progress_may(const SemanticsDef& sem, const IndexedPredicate& P,
                               const Config& c, const Bounds& b);

/// Preservation of the whole semantic relation: every derivable result of a
/// P_idx configuration is again in P_idx (the strong-soundness check).
CheckResult check_preservation_global(const SemanticsDef& sem, const IndexedPredicate& P,
                                      const Config& c, const PredicateIndex& idx, int depth);

// --- Suite orchestration ----------------------------------------------------

struct ConditionTally {
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
  std::vector<Counterexample> counterexamples;

  int total() const { return pass + fail + inconclusive; }
};

struct Report {
  std::string semantics_id;
  std::string predicate_id;
  // Keyed by condition name: S1, S2, S3, S4, preservation, pev-stuck-free,
  // wrong-free.
  std::map<std::string, ConditionTally> conditions;
  int corpus_size = 0;
  std::vector<std::string> notes;

  bool any_fail() const;
  bool any_inconclusive() const;
  double inconclusive_ratio() const;
};

struct SuiteOptions {
  bool end_to_end = true;        // run the PEV-stuck / Wrong probes
  int max_counterexamples = 16;  // per condition
};

/// Materializes rule instances for a configuration by feeding derivable
/// results plus a pool of generated results through the schedules.
std::vector<RuleInstance> materialize_instances(Evaluator& ev, const Config& c,
                                                const std::vector<Result>& pool,
                                                const Bounds& b);

/// Runs S1-S4 (plus preservation and optional end-to-end probes) over the
/// corpus. Deterministic given the bounds; the report is sorted.
Report run_suite(const SemanticsDef& sem, const IndexedPredicate& P,
                 const std::vector<std::pair<Config, PredicateIndex>>& corpus,
                 const std::vector<Result>& result_pool, const Bounds& b,
                 const SuiteOptions& opts = {});

}  // namespace bsw
