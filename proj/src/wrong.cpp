// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/wrong.hpp"

#include "bsw/stack.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace bsw {

std::string WrongEvidence::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NoRule:
      os << "no rule concludes " << config.text();
      break;
    case Kind::AllReject:
      os << "every rule for " << config.text() << " rejects result " << offending->text()
         << " at premise " << premise;
      break;
    case Kind::Propagated:
      os << "propagated from " << config.text();
      break;
  }
  return os.str();
}

namespace {

struct Group {
  Config opens;
  std::vector<RuleState> states;
};

std::vector<Group> group_by_current(const std::vector<RuleState>& states) {
  std::vector<Group> groups;
  for (const RuleState& st : states) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.opens == st.current(); });
    if (it == groups.end())
      groups.push_back(Group{st.current(), {st}});
    else
      it->states.push_back(st);
  }
  return groups;
}

WrongOutcome value_outcome(const Result& r) {
  return WrongOutcome{WrongOutcome::Kind::Value, r, std::nullopt};
}
WrongOutcome wrong_outcome(WrongEvidence ev) {
  return WrongOutcome{WrongOutcome::Kind::Wrong, std::nullopt, std::move(ev)};
}
WrongOutcome exhausted_outcome() {
  return WrongOutcome{WrongOutcome::Kind::Exhausted, std::nullopt, std::nullopt};
}

// Single-path evaluation; fuel charges match the tree-reduction schemas one
// for one (axiom, open-first, open-next, conclude).
class SinglePath {
 public:
  SinglePath(const SemanticsDef& sem, Strategy s) : sem_(sem), rng_(s.seed), strategy_(s) {}

  WrongOutcome eval(const Config& c, long& fuel) {
    if (sem_.is_result(c)) {
      if (!take(fuel)) return exhausted_outcome();
      return value_outcome(Result{c});
    }
    std::vector<RuleState> states = sem_.open_rules(c);
    if (states.empty())
      return wrong_outcome(WrongEvidence{WrongEvidence::Kind::NoRule, c, 0, std::nullopt});
    if (!take(fuel)) return exhausted_outcome();
    std::vector<Group> groups = group_by_current(states);
    const Group& g = groups[pick(groups.size())];
    std::vector<RuleState> bundle = g.states;
    Config current = g.opens;

    for (;;) {
      WrongOutcome sub = eval(current, fuel);
      if (sub.is_exhausted()) return sub;
      if (sub.is_wrong())
        return wrong_outcome(WrongEvidence{WrongEvidence::Kind::Propagated, current, 0,
                                           std::nullopt});
      const Result r = *sub.value;
      bool can_conclude = false;
      std::vector<RuleState> continuing;
      int position = bundle.front().position();
      for (const RuleState& st : bundle) {
        FeedOutcome fo = feed(st, r);
        if (fo.rejected()) continue;
        if (fo.concluded()) can_conclude = true;
        if (fo.continued()) continuing.push_back(std::move(*fo.next));
      }
      std::vector<Group> next_groups = group_by_current(continuing);
      size_t options = next_groups.size() + (can_conclude ? 1 : 0);
      if (options == 0)
        return wrong_outcome(WrongEvidence{WrongEvidence::Kind::AllReject, c, position, r});
      size_t idx = pick(options);
      if (can_conclude && idx == 0) {
        if (!take(fuel)) return exhausted_outcome();
        return value_outcome(r);
      }
      const Group& ng = next_groups[can_conclude ? idx - 1 : idx];
      if (!take(fuel)) return exhausted_outcome();
      bundle = ng.states;
      current = ng.opens;
    }
  }

 private:
  static bool take(long& fuel) {
    if (fuel <= 0) return false;
    --fuel;
    return true;
  }

  size_t pick(size_t n) {
    if (n <= 1 || strategy_.kind != Strategy::Kind::Random) return 0;
    return static_cast<size_t>(rng_() % n);
  }

  const SemanticsDef& sem_;
  std::mt19937_64 rng_;
  Strategy strategy_;
};

// Exhaustive exploration. Paths carry their own remaining fuel; outcomes are
// deduplicated per (outcome, fuel) so converging branches collapse.
class AllPaths {
 public:
  AllPaths(const SemanticsDef& sem, int budget) : sem_(sem), budget_(budget) {}

  using Sink = std::function<void(WrongOutcome, long)>;

  void eval(const Config& c, long fuel, const Sink& sink) {
    if (budget_spent_ >= budget_) {
      budget_hit = true;
      return;
    }
    ++budget_spent_;
    if (sem_.is_result(c)) {
      if (fuel >= 1)
        sink(value_outcome(Result{c}), fuel - 1);
      else
        sink(exhausted_outcome(), 0);
      return;
    }
    std::vector<RuleState> states = sem_.open_rules(c);
    if (states.empty()) {
      sink(wrong_outcome(WrongEvidence{WrongEvidence::Kind::NoRule, c, 0, std::nullopt}), fuel);
      return;
    }
    if (fuel < 1) {
      sink(exhausted_outcome(), 0);
      return;
    }
    for (const Group& g : group_by_current(states)) rule(c, g.states, g.opens, fuel - 1, sink);
  }

  bool budget_hit = false;

 private:
  void rule(const Config& conclusion, const std::vector<RuleState>& bundle, const Config& current,
            long fuel, const Sink& sink) {
    eval(current, fuel, [&](WrongOutcome sub, long left) {
      if (sub.is_exhausted()) {
        sink(std::move(sub), 0);
        return;
      }
      if (sub.is_wrong()) {
        sink(wrong_outcome(WrongEvidence{WrongEvidence::Kind::Propagated, current, 0,
                                         std::nullopt}),
             left);
        return;
      }
      const Result r = *sub.value;
      bool can_conclude = false;
      std::vector<RuleState> continuing;
      int position = bundle.front().position();
      for (const RuleState& st : bundle) {
        FeedOutcome fo = feed(st, r);
        if (fo.rejected()) continue;
        if (fo.concluded()) can_conclude = true;
        if (fo.continued()) continuing.push_back(std::move(*fo.next));
      }
      std::vector<Group> next_groups = group_by_current(continuing);
      if (!can_conclude && next_groups.empty()) {
        sink(wrong_outcome(WrongEvidence{WrongEvidence::Kind::AllReject, conclusion, position, r}),
             left);
        return;
      }
      if (can_conclude) {
        if (left >= 1)
          sink(value_outcome(r), left - 1);
        else
          sink(exhausted_outcome(), 0);
      }
      for (const Group& ng : next_groups) {
        if (left >= 1)
          rule(conclusion, ng.states, ng.opens, left - 1, sink);
        else
          sink(exhausted_outcome(), 0);
      }
    });
  }

  const SemanticsDef& sem_;
  int budget_;
  int budget_spent_ = 0;
};

}  // namespace

WrongOutcome eval_wrong(const SemanticsDef& sem, const Config& c, long fuel, Strategy s) {
  if (fuel < 1) throw std::invalid_argument("eval_wrong: fuel must be >= 1");
  if (s.kind == Strategy::Kind::All)
    throw std::invalid_argument("eval_wrong: use eval_wrong_all for strategy All");
  SinglePath sp(sem, s);
  long left = fuel;
  return sp.eval(c, left);
}

std::set<Result> WrongAllOutcomes::value_results() const {
  std::set<Result> out;
  for (const auto& [r, _] : values) out.insert(r);
  return out;
}

WrongSummary WrongClassifier::classify(const Config& c, int fuel) {
  constexpr int kDirectDepth = 1500;
  if (fuel > kDirectDepth && !deep_) {
    WrongSummary out;
    deep_ = true;
    call_on_large_stack([&] { out = classify(c, fuel); });
    deep_ = false;
    return out;
  }
  auto key = std::make_pair(c.text(), fuel);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  WrongSummary out;
  if (sem_.is_result(c)) {
    out.values.insert(Result{c});
    memo_.emplace(std::move(key), out);
    return out;
  }
  std::vector<RuleState> states = sem_.open_rules(c);
  if (states.empty()) {
    out.wrong = true;
    out.evidence = WrongEvidence{WrongEvidence::Kind::NoRule, c, 0, std::nullopt};
    memo_.emplace(std::move(key), out);
    return out;
  }
  if (fuel <= 0) {
    out.exhausted = true;
    memo_.emplace(std::move(key), out);
    return out;
  }

  std::function<void(const std::vector<RuleState>&, const Config&)> walk =
      [&](const std::vector<RuleState>& bundle, const Config& current) {
        WrongSummary sub = classify(current, fuel - 1);
        out.exhausted |= sub.exhausted;
        if (sub.wrong) {
          out.wrong = true;
          if (!out.evidence)
            out.evidence =
                WrongEvidence{WrongEvidence::Kind::Propagated, current, 0, std::nullopt};
        }
        for (const Result& r : sub.values) {
          bool can_conclude = false;
          std::vector<RuleState> continuing;
          int position = bundle.front().position();
          for (const RuleState& st : bundle) {
            FeedOutcome fo = feed(st, r);
            if (fo.rejected()) continue;
            if (fo.concluded()) can_conclude = true;
            if (fo.continued()) continuing.push_back(std::move(*fo.next));
          }
          std::vector<Group> groups = group_by_current(continuing);
          if (!can_conclude && groups.empty()) {
            out.wrong = true;
            if (!out.evidence)
              out.evidence = WrongEvidence{WrongEvidence::Kind::AllReject, c, position, r};
            continue;
          }
          if (can_conclude) out.values.insert(r);
          for (const Group& g : groups) walk(g.states, g.opens);
        }
      };

  for (const Group& g : group_by_current(states)) walk(g.states, g.opens);
  memo_.emplace(std::move(key), out);
  return out;
}

WrongAllOutcomes eval_wrong_all(const SemanticsDef& sem, const Config& c, long fuel,
                                int branch_budget) {
  if (fuel < 1) throw std::invalid_argument("eval_wrong_all: fuel must be >= 1");
  WrongAllOutcomes acc;
  AllPaths ap(sem, branch_budget);
  ap.eval(c, fuel, [&](WrongOutcome out, long) {
    switch (out.kind) {
      case WrongOutcome::Kind::Value: {
        Result key = *out.value;
        acc.values.emplace(std::move(key), std::move(out));
        break;
      }
      case WrongOutcome::Kind::Wrong:
        if (!acc.wrong) acc.wrong = std::move(out);
        break;
      case WrongOutcome::Kind::Exhausted:
        if (!acc.exhausted) acc.exhausted = std::move(out);
        break;
    }
  });
  acc.budget_hit = ap.budget_hit;
  return acc;
}

}  // namespace bsw
