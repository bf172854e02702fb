// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/evaluator.hpp"

#include <stdexcept>

namespace bsw {

namespace {

// Explores one schedule, collecting every result the rule can conclude with
// premise subtrees of height <= depth - 1.
void explore(Evaluator& ev, const RuleState& st, int depth, std::set<Result>& out) {
  for (const Result& r : ev.eval_all(st.current(), depth - 1)) {
    FeedOutcome fo = feed(st, r);
    if (fo.rejected()) continue;
    if (fo.concluded()) {
      out.insert(*fo.conclusion);
    } else {
      explore(ev, *fo.next, depth, out);
    }
  }
}

}  // namespace

std::set<Result> Evaluator::eval_all(const Config& c, int depth) {
  if (depth < 1) throw std::invalid_argument("eval_all: depth must be >= 1");
  if (sem_.is_result(c)) return {Result{c}};
  if (depth == 1) return {};  // a non-result needs a rule node above its premises
  auto key = std::make_pair(c.text(), depth);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::set<Result> out;
  for (const RuleState& st : sem_.open_rules(c)) explore(*this, st, depth, out);
  memo_.emplace(std::move(key), out);
  return out;
}

namespace {

// Builds the premise subtrees for one schedule, following canonical result
// order, and returns the first complete derivation found (optionally pinned
// to a required conclusion result).
std::optional<CompleteTree> search_tree(Evaluator& ev, const SemanticsDef& sem,
                                        const Config& root, const RuleState& st,
                                        std::vector<CompleteTree>& acc, int depth,
                                        const std::optional<Result>& want) {
  for (const Result& r : ev.eval_all(st.current(), depth - 1)) {
    FeedOutcome fo = feed(st, r);
    if (fo.rejected()) continue;
    if (fo.concluded() && want && !(*fo.conclusion == *want)) continue;
    auto sub = ev.prove_judgment(st.current(), r, depth - 1);
    if (!sub) continue;  // cannot happen for r in eval_all, kept as a guard
    acc.push_back(std::move(*sub));
    if (fo.concluded()) {
      CompleteTree t{Judgment{root, *fo.conclusion}, acc};
      acc.pop_back();
      return t;
    }
    auto found = search_tree(ev, sem, root, *fo.next, acc, depth, want);
    acc.pop_back();
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

std::optional<CompleteTree> Evaluator::prove_one(const Config& c, int depth) {
  if (depth < 1) throw std::invalid_argument("prove_one: depth must be >= 1");
  if (sem_.is_result(c)) return CompleteTree{Judgment{c, Result{c}}, {}};
  if (depth == 1) return std::nullopt;
  for (const RuleState& st : sem_.open_rules(c)) {
    std::vector<CompleteTree> acc;
    auto found = search_tree(*this, sem_, c, st, acc, depth, std::nullopt);
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<CompleteTree> Evaluator::prove_judgment(const Config& c, const Result& r,
                                                      int depth) {
  if (depth < 1) throw std::invalid_argument("prove_judgment: depth must be >= 1");
  if (sem_.is_result(c)) {
    if (Result{c} == r) return CompleteTree{Judgment{c, r}, {}};
    return std::nullopt;
  }
  if (depth == 1) return std::nullopt;
  for (const RuleState& st : sem_.open_rules(c)) {
    std::vector<CompleteTree> acc;
    auto found = search_tree(*this, sem_, c, st, acc, depth, r);
    if (found) return found;
  }
  return std::nullopt;
}

std::set<Result> eval_all(const SemanticsDef& sem, const Config& c, int depth) {
  Evaluator ev(sem);
  return ev.eval_all(c, depth);
}

std::optional<CompleteTree> prove_one(const SemanticsDef& sem, const Config& c, int depth) {
  Evaluator ev(sem);
  return ev.prove_one(c, depth);
}

}  // namespace bsw
