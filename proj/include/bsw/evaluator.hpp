// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "bsw/kernel.hpp"

namespace bsw {

/// A finite proof tree in the original rule set R.
struct CompleteTree {
  Judgment root;
  std::vector<CompleteTree> children;  // empty for result axioms r => r

  bool is_axiom() const { return children.empty(); }
};

/// Exhaustive inductive proof search over the original rules, memoized on
/// (configuration, depth). Depth counts proof-tree height.
class Evaluator {
 public:
  explicit Evaluator(SemanticsDef sem) : sem_(std::move(sem)) {}

  const SemanticsDef& semantics() const { return sem_; }

  // Exactly the results derivable by a proof tree of height <= depth.
  std::set<Result> eval_all(const Config& c, int depth);

  // Some complete tree with root c => r, if any derivation exists in depth.
  std::optional<CompleteTree> prove_one(const Config& c, int depth);

  // A derivation of the specific judgment c => r, if one exists in depth.
  std::optional<CompleteTree> prove_judgment(const Config& c, const Result& r, int depth);

 private:
  SemanticsDef sem_;
  std::map<std::pair<std::string, int>, std::set<Result>> memo_;
};

// One-shot conveniences matching the operation signatures.
std::set<Result> eval_all(const SemanticsDef& sem, const Config& c, int depth);
std::optional<CompleteTree> prove_one(const SemanticsDef& sem, const Config& c, int depth);

}  // namespace bsw
