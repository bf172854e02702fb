// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsw/enumerate.hpp"
#include "bsw/kernel.hpp"
#include "bsw/soundness.hpp"
#include "bsw/traces.hpp"

namespace bsw::cli {

struct RunConfig {
  std::string calculus = "lam";
  long fuel = 10000;
  int depth = 64;
  std::string strategy = "first";
  std::uint64_t seed = 0;
  int size = 5;
  int count = 1000;
  bool json = false;
  bool strict = false;
  bool trace = false;
  std::string mode = "standard";
  std::string table;  // path of a .fj program for the Java-like calculi
};

/// A calculus plugged into the front end: semantics, parsing, type systems,
/// corpus generation and shrinking.
struct CalculusHandle {
  std::string id;
  SemanticsDef sem;
  std::function<Config(const std::string&)> parse;
  std::vector<std::pair<std::string, IndexedPredicate>> typesystems;
  std::function<std::vector<Config>(const GenSpec&)> generate;
  std::vector<Result> pool;
  std::function<std::vector<Config>(const Config&)> shrink;  // strict subconfigurations
  // Canonical corner configurations always added to generated corpora.
  std::vector<Config> seeds;
};

std::vector<std::string> calculus_ids();
/// table_source: the text of a .fj program for fjl/fjo/fji (empty = preset).
CalculusHandle make_calculus(const std::string& id, const std::string& table_source = "");

// --- Cross-check machinery (also used by the acceptance suite) -------------

struct XcheckStats {
  long checked = 0;
  long stuck = 0;
  long exhausted = 0;
  long steps_validated = 0;
  // per-route mismatch counts against the reference evaluator
  long pev_mismatches = 0;
  long wrong_mismatches = 0;
  long trace_mismatches = 0;
  long stuck_wrong_mismatches = 0;
  std::vector<std::string> disagreements;  // sample messages, empty on success
  std::vector<std::string> violations;     // structural invariant breaches

  long total_mismatches() const {
    return pev_mismatches + wrong_mismatches + trace_mismatches + stuck_wrong_mismatches;
  }
  bool ok() const { return total_mismatches() == 0 && violations.empty(); }
};

struct XcheckOptions {
  int depth = 50;
  long fuel = 500;
  bool validate_trees = true;  // per-step order/shape validation on explored paths
  int validate_budget = 512;   // path budget per configuration for validation
};

/// Runs the conservativity, stuck/wrong and trace agreement suites over the
/// corpus: reference results, exhaustive tree-reduction results, Wrong values
/// and finite-trace endpoints must coincide; Stuck iff Wrong.
XcheckStats xcheck_corpus(const SemanticsDef& sem, const std::vector<Config>& corpus,
                          const XcheckOptions& opts);

/// Test seam: the derived routes run on `routes` while the reference
/// evaluator runs on `reference`; an injected bug on either side surfaces as
/// a disagreement.
XcheckStats xcheck_corpus_ref(const SemanticsDef& routes, const SemanticsDef& reference,
                              const std::vector<Config>& corpus, const XcheckOptions& opts);

/// Entry point used by the binary; out/err receive the reports.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsw::cli
