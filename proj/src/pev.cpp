// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/pev.hpp"

#include "bsw/stack.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bsw {

namespace {

TreePtr make_node(PartialTree node) { return std::make_shared<const PartialTree>(std::move(node)); }

TreePtr make_leaf(const SemanticsDef& sem, const Config& c) {
  PartialTree n;
  n.config = c;
  if (!sem.is_result(c))
    n.bundle = std::make_shared<const std::vector<RuleState>>(sem.open_rules(c));
  return make_node(std::move(n));
}

}  // namespace

TreePtr init_tree(const SemanticsDef& sem, const Config& c) { return make_leaf(sem, c); }

bool is_complete(const TreePtr& t) {
  if (t->unknown()) return false;
  for (const TreePtr& ch : t->children)
    if (!is_complete(ch)) return false;
  return true;
}

bool tree_identical(const TreePtr& a, const TreePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->config != b->config) return false;
  if (a->outcome != b->outcome) return false;
  if (a->children.size() != b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!tree_identical(a->children[i], b->children[i])) return false;
  return true;
}

bool tree_leq(const TreePtr& a, const TreePtr& b) {
  if (a->config != b->config) return false;
  if (!a->unknown()) return tree_identical(a, b);
  if (a->children.size() > b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!tree_leq(a->children[i], b->children[i])) return false;
  return true;
}

namespace {

// Counts Unknown nodes per level and checks local invariants.
std::optional<std::string> check_node(const TreePtr& t, int level,
                                      std::map<int, int>& unknowns_per_level) {
  if (t->unknown()) {
    if (++unknowns_per_level[level] > 1) {
      std::ostringstream os;
      os << "more than one Unknown at level " << level;
      return os.str();
    }
  }
  bool seen_unknown_child = false;
  for (const TreePtr& ch : t->children) {
    if (seen_unknown_child)
      return std::string("child to the right of an Unknown child at ") + t->config.text();
    if (ch->unknown()) {
      seen_unknown_child = true;
      if (!t->unknown())
        return std::string("Unknown child under a completed node at ") + t->config.text();
    }
    if (auto err = check_node(ch, level + 1, unknowns_per_level)) return err;
  }
  if (!t->unknown() && !is_complete(t))
    return std::string("result-rooted subtree not complete at ") + t->config.text();
  return std::nullopt;
}

}  // namespace

std::optional<std::string> tree_invariant_violation(const TreePtr& t) {
  std::map<int, int> per_level;
  return check_node(t, 0, per_level);
}

std::string render_tree(const TreePtr& t) {
  std::ostringstream os;
  std::function<void(const TreePtr&, int)> go = [&](const TreePtr& n, int indent) {
    for (int i = 0; i < indent; ++i) os << "  ";
    os << n->config.text() << " => " << (n->unknown() ? std::string("?") : n->outcome->text())
       << '\n';
    for (const TreePtr& ch : n->children) go(ch, indent + 1);
  };
  go(t, 0);
  return os.str();
}

const char* schema_name(StepOption::Schema s) {
  switch (s) {
    case StepOption::Schema::Axiom: return "axiom";
    case StepOption::Schema::OpenFirst: return "open-first";
    case StepOption::Schema::OpenNext: return "open-next";
    case StepOption::Schema::Conclude: return "conclude";
  }
  return "?";
}

namespace {

// Path from the root to the unique deepest Unknown node (empty if the root is
// completed). Descends into the last child while it is Unknown.
std::vector<const PartialTree*> unknown_spine(const TreePtr& t) {
  std::vector<const PartialTree*> spine;
  if (!t->unknown()) return spine;
  const PartialTree* cur = t.get();
  spine.push_back(cur);
  while (!cur->children.empty() && cur->children.back()->unknown()) {
    cur = cur->children.back().get();
    spine.push_back(cur);
  }
  return spine;
}

struct Grouped {
  Config opens;
  std::vector<RuleState> states;
  std::string rule_id;
};

// Groups schedules by their pending premise configuration, preserving
// first-appearance order.
std::vector<Grouped> group_by_current(const std::vector<RuleState>& states) {
  std::vector<Grouped> groups;
  for (const RuleState& st : states) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Grouped& g) { return g.opens == st.current(); });
    if (it == groups.end())
      groups.push_back(Grouped{st.current(), {st}, st.rule_id()});
    else
      it->states.push_back(st);
  }
  return groups;
}

}  // namespace

std::vector<StepOption> step_options(const SemanticsDef& sem, const TreePtr& t) {
  std::vector<StepOption> opts;
  auto spine = unknown_spine(t);
  if (spine.empty()) return opts;  // completed root: irreducible
  const PartialTree* node = spine.back();

  if (node->children.empty()) {
    if (sem.is_result(node->config)) {
      opts.push_back(StepOption{StepOption::Schema::Axiom, "", std::nullopt, std::nullopt});
      return opts;
    }
    for (const Grouped& g : group_by_current(node->bundle_states()))
      opts.push_back(StepOption{StepOption::Schema::OpenFirst, g.rule_id, g.opens, std::nullopt});
    return opts;  // empty bundle: stuck, no rule for this configuration
  }

  const Result fed = *node->children.back()->outcome;
  std::vector<RuleState> continuing;
  std::optional<std::string> concluder;
  for (const RuleState& st : node->bundle_states()) {
    FeedOutcome fo = feed(st, fed);
    if (fo.rejected()) continue;
    if (fo.concluded() && !concluder) concluder = st.rule_id();
    if (fo.continued()) continuing.push_back(std::move(*fo.next));
  }
  if (concluder)
    opts.push_back(StepOption{StepOption::Schema::Conclude, *concluder, std::nullopt, fed});
  for (const Grouped& g : group_by_current(continuing))
    opts.push_back(StepOption{StepOption::Schema::OpenNext, g.rule_id, g.opens, fed});
  return opts;  // empty: every compatible schedule rejected the result
}

TreePtr apply_option(const SemanticsDef& sem, const TreePtr& t, const StepOption& opt,
                     StepEvent* event) {
  auto spine = unknown_spine(t);
  if (spine.empty()) throw std::logic_error("apply_option: tree is irreducible");
  const PartialTree* node = spine.back();

  PartialTree next = *node;
  switch (opt.schema) {
    case StepOption::Schema::Axiom:
      next.outcome = Result{node->config};
      next.bundle.reset();
      break;
    case StepOption::Schema::OpenFirst: {
      std::vector<RuleState> grp;
      for (const RuleState& st : node->bundle_states())
        if (st.current() == *opt.opens) grp.push_back(st);
      next.bundle = std::make_shared<const std::vector<RuleState>>(std::move(grp));
      next.children = {make_leaf(sem, *opt.opens)};
      break;
    }
    case StepOption::Schema::OpenNext: {
      const Result fed = *node->children.back()->outcome;
      std::vector<RuleState> grp;
      for (const RuleState& st : node->bundle_states()) {
        FeedOutcome fo = feed(st, fed);
        if (fo.continued() && fo.next->current() == *opt.opens) grp.push_back(std::move(*fo.next));
      }
      next.bundle = std::make_shared<const std::vector<RuleState>>(std::move(grp));
      next.children.push_back(make_leaf(sem, *opt.opens));
      break;
    }
    case StepOption::Schema::Conclude:
      next.outcome = opt.result;
      next.bundle.reset();
      break;
  }

  // Rebuild the path bottom-up; untouched siblings are shared.
  TreePtr rebuilt = make_node(std::move(next));
  for (int i = static_cast<int>(spine.size()) - 2; i >= 0; --i) {
    PartialTree parent = *spine[i];
    parent.children.back() = rebuilt;
    rebuilt = make_node(std::move(parent));
  }

  if (event) {
    event->schema = schema_name(opt.schema);
    event->address.clear();
    for (size_t i = 0; i + 1 < spine.size(); ++i)
      event->address.push_back(static_cast<int>(spine[i]->children.size()) - 1);
    event->rule_id = opt.rule_id;
    event->opened = opt.opens;
    event->fed = opt.result;
    if (opt.schema == StepOption::Schema::OpenNext) {
      event->fed = *node->children.back()->outcome;
    } else if (opt.schema == StepOption::Schema::Axiom) {
      event->fed = Result{node->config};
    }
  }
  return rebuilt;
}

std::optional<StepResult> step(const SemanticsDef& sem, const TreePtr& t, Strategy s) {
  std::vector<StepOption> options = step_options(sem, t);
  if (options.empty()) return std::nullopt;
  size_t idx = 0;
  if (s.kind == Strategy::Kind::Random && options.size() > 1) {
    std::mt19937_64 rng(s.seed);
    idx = static_cast<size_t>(rng() % options.size());
  }
  StepResult out;
  out.next = apply_option(sem, t, options[idx], &out.event);
  return out;
}

Strategy parse_strategy(const std::string& name, std::uint64_t seed, int budget) {
  if (name == "first") return Strategy::first();
  if (name == "random") return Strategy::random(seed);
  if (name == "all") return Strategy::all(budget);
  throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

RunOutcome classify(TreePtr t, long steps) {
  RunOutcome out;
  out.tree = std::move(t);
  out.steps = steps;
  if (out.tree->unknown()) {
    out.kind = RunOutcome::Kind::Stuck;
  } else {
    out.kind = RunOutcome::Kind::Converged;
    out.result = out.tree->outcome;
  }
  return out;
}

}  // namespace

RunOutcome run(const SemanticsDef& sem, const Config& c, long fuel, Strategy s,
               const RunOptions& opts) {
  if (fuel < 1) throw std::invalid_argument("run: fuel must be >= 1");
  if (s.kind == Strategy::Kind::All)
    throw std::invalid_argument("run: use run_all for strategy All");
  std::mt19937_64 rng(s.seed);
  TreePtr t = init_tree(sem, c);
  std::vector<StepEvent> events;
  for (long used = 0; used < fuel; ++used) {
    std::vector<StepOption> options = step_options(sem, t);
    if (options.empty()) {
      RunOutcome out = classify(t, used);
      out.events = std::move(events);
      return out;
    }
    int idx = 0;
    if (opts.choose) {
      idx = opts.choose(unknown_spine(t).back()->config, options);
    } else if (s.kind == Strategy::Kind::Random && options.size() > 1) {
      idx = static_cast<int>(rng() % options.size());
    }
    StepEvent ev;
    TreePtr next = apply_option(sem, t, options[static_cast<size_t>(idx)], &ev);
    if (opts.observer) opts.observer->on_step(t, ev, next);
    if (opts.log_events) events.push_back(ev);
    t = next;
  }
  if (step_options(sem, t).empty()) {
    RunOutcome out = classify(t, fuel);
    out.events = std::move(events);
    return out;
  }
  RunOutcome out;
  out.kind = RunOutcome::Kind::Exhausted;
  out.tree = t;
  out.steps = fuel;
  out.events = std::move(events);
  return out;
}

std::set<Result> AllOutcomes::converged_results() const {
  std::set<Result> out;
  for (const auto& [r, _] : converged) out.insert(r);
  return out;
}

namespace {

void explore_all(const SemanticsDef& sem, TreePtr t, long fuel, long steps, AllOutcomes& acc,
                 const RunOptions& opts, int budget) {
  for (;;) {
    if (acc.paths >= budget) {
      acc.budget_hit = true;
      return;
    }
    std::vector<StepOption> options = step_options(sem, t);
    if (options.empty()) {
      RunOutcome out = classify(t, steps);
      ++acc.paths;
      if (out.kind == RunOutcome::Kind::Converged) {
        Result key = *out.result;
        acc.converged.emplace(std::move(key), std::move(out));
      } else if (!acc.stuck) {
        acc.stuck = std::move(out);
      }
      return;
    }
    if (fuel == 0) {
      ++acc.paths;
      if (!acc.exhausted) {
        RunOutcome out;
        out.kind = RunOutcome::Kind::Exhausted;
        out.tree = t;
        out.steps = steps;
        acc.exhausted = std::move(out);
      }
      return;
    }
    if (options.size() == 1) {
      StepEvent ev;
      TreePtr next = apply_option(sem, t, options[0], &ev);
      if (opts.observer) opts.observer->on_step(t, ev, next);
      t = next;
      --fuel;
      ++steps;
      continue;
    }
    for (const StepOption& opt : options) {
      StepEvent ev;
      TreePtr next = apply_option(sem, t, opt, &ev);
      if (opts.observer) opts.observer->on_step(t, ev, next);
      explore_all(sem, next, fuel - 1, steps + 1, acc, opts, budget);
    }
    return;
  }
}

}  // namespace

AllOutcomes run_all(const SemanticsDef& sem, const Config& c, long fuel, int branch_budget,
                    const RunOptions& opts) {
  if (fuel < 1) throw std::invalid_argument("run_all: fuel must be >= 1");
  AllOutcomes acc;
  explore_all(sem, init_tree(sem, c), fuel, 0, acc, opts, branch_budget);
  return acc;
}

AllSummary AllClassifier::classify(const Config& c, int fuel) {
  // the recursion is fuel-deep; move big budgets onto a large stack
  constexpr int kDirectDepth = 1500;
  if (fuel > kDirectDepth && !deep_) {
    AllSummary out;
    deep_ = true;
    call_on_large_stack([&] { out = classify(c, fuel); });
    deep_ = false;
    return out;
  }
  auto key = std::make_pair(c.text(), fuel);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  AllSummary out;
  if (fuel <= 0) {
    out.exhausted = true;
    memo_.emplace(std::move(key), out);
    return out;
  }

  // Advances a node whose last child is complete, consuming memoized child
  // summaries; the node mechanics go through the tree-reduction code.
  std::function<void(const TreePtr&)> walk = [&](const TreePtr& t) {
    const Config child_cfg = t->children.back()->config;
    AllSummary sub = classify(child_cfg, fuel - 1);
    out.stuck |= sub.stuck;
    out.exhausted |= sub.exhausted;
    for (const Result& r : sub.results) {
      PartialTree done = *t;
      PartialTree completed;
      completed.config = child_cfg;
      completed.outcome = r;
      done.children.back() = std::make_shared<const PartialTree>(std::move(completed));
      TreePtr td = std::make_shared<const PartialTree>(std::move(done));
      std::vector<StepOption> opts2 = step_options(sem_, td);
      if (opts2.empty()) out.stuck = true;  // every compatible schedule rejected r
      for (const StepOption& o : opts2) {
        if (o.schema == StepOption::Schema::Conclude)
          out.results.insert(r);
        else
          walk(apply_option(sem_, td, o));
      }
    }
  };

  TreePtr t = init_tree(sem_, c);
  std::vector<StepOption> opts = step_options(sem_, t);
  if (opts.empty()) {
    out.stuck = true;  // a non-result with no rule
  } else {
    for (const StepOption& o : opts) {
      if (o.schema == StepOption::Schema::Axiom)
        out.results.insert(Result{c});
      else
        walk(apply_option(sem_, t, o));
    }
  }
  memo_.emplace(std::move(key), out);
  return out;
}

}  // namespace bsw
