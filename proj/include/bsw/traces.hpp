// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsw/evaluator.hpp"
#include "bsw/kernel.hpp"
#include "bsw/pev.hpp"

namespace bsw {

/// A finite sequence of visited configurations.
using Trace = std::vector<Config>;

std::string render_trace(const Trace& t);

/// prefix . cycle . cycle . ... with a nonempty cycle.
struct PeriodicTrace {
  Trace prefix;
  Trace cycle;

  // First n elements of the denoted infinite trace.
  Trace unroll(size_t n) const;
};

/// The trace assigned by the trace-introduction rules: each node contributes
/// its configuration followed by its premise traces; result axioms contribute
/// the one-element trace r.
Trace finite_trace(const CompleteTree& tree);

/// In-order flattening of a partial tree: complete children contribute their
/// finite traces, the Unknown child its own prefix. On a complete tree this
/// equals finite_trace.
Trace trace_prefix(const TreePtr& t);

/// A finite set of configurations with chosen schedules and premise indices,
/// certifying an eventually-periodic infinite trace for every member.
struct DivergenceWitness {
  struct Choice {
    std::string rule_id;  // schedule selector: meta-rule id plus branch tag
    int index = 0;        // 1-based premise index k
  };
  std::map<Config, Choice> members;
};

struct WitnessVerdict {
  bool valid = false;
  std::map<Config, PeriodicTrace> traces;  // per member, when valid
  std::string reason;                      // first failing hypothesis, when invalid
  bool depth_limited = false;              // failure may be a depth artifact
};

/// Checks the guarded-equation hypotheses for every member: premises before k
/// derivable (bounded by depth), k-th premise configuration again a member.
/// Valid verdicts carry the solved eventually-periodic traces.
WitnessVerdict verify_divergence_witness(const SemanticsDef& sem, const DivergenceWitness& w,
                                         int depth);

// Witness file format: {"members":[{"config": text, "rule": id, "index": k}]}.
DivergenceWitness parse_witness_json(const std::string& text,
                                     const std::function<Config(const std::string&)>& parse);
std::string witness_to_json(const DivergenceWitness& w);

}  // namespace bsw
