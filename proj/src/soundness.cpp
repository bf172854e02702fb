// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/soundness.hpp"

#include <algorithm>
#include <sstream>

namespace bsw {

bool Report::any_fail() const {
  for (const auto& [_, t] : conditions)
    if (t.fail > 0) return true;
  return false;
}

bool Report::any_inconclusive() const {
  for (const auto& [_, t] : conditions)
    if (t.inconclusive > 0) return true;
  return false;
}

double Report::inconclusive_ratio() const {
  long total = 0, inc = 0;
  for (const auto& [_, t] : conditions) {
    total += t.total();
    inc += t.inconclusive;
  }
  return total == 0 ? 0.0 : static_cast<double>(inc) / static_cast<double>(total);
}

namespace {

std::string premises_text(const RuleInstance& inst) {
  std::ostringstream os;
  for (int i = 0; i < inst.arity(); ++i) {
    if (i) os << "  ";
    os << inst.premises[i].config.text() << " => " << inst.premises[i].result.text();
  }
  return os.str();
}

}  // namespace

CheckResult check_local_preservation(const SemanticsDef& sem, const IndexedPredicate& P,
                                     const RuleInstance& inst, const PredicateIndex& idx,
                                     const Bounds& b) {
  (void)sem;
  (void)b;
  if (!P.holds(idx, inst.config))
    throw std::invalid_argument("check_local_preservation: predicate does not hold on the "
                                "conclusion configuration");
  const int m = inst.arity();

  // Chain property for a fixed witness tuple: for every k, if all earlier
  // results satisfy their indexes then the k-th premise configuration does.
  auto chain_first_violation = [&](const std::vector<PredicateIndex>& w) -> int {
    bool antecedent = true;
    for (int k = 1; k <= m; ++k) {
      if (antecedent && !P.holds(w[static_cast<size_t>(k - 1)],
                                 inst.premises[static_cast<size_t>(k - 1)].config))
        return k;
      if (antecedent)
        antecedent = P.holds(w[static_cast<size_t>(k - 1)],
                             inst.premises[static_cast<size_t>(k - 1)].result.cfg);
    }
    return 0;  // no violation
  };

  if (P.s1_oracle) {
    if (auto w = P.s1_oracle(inst, idx)) {
      if (static_cast<int>(w->size()) != m || !(w->back() == idx)) {
        return CheckResult::fail(Counterexample{inst.config.text(), idx.text(), inst.rule_id, 0,
                                                "oracle returned a malformed witness tuple"});
      }
      int k = chain_first_violation(*w);
      if (k == 0) return CheckResult::pass();
      return CheckResult::fail(Counterexample{
          inst.config.text(), idx.text(), inst.rule_id, k,
          "oracle witnesses violate the chain; premises: " + premises_text(inst)});
    }
  }

  // Backtracking search over the index universe; the last index is pinned to
  // the conclusion index. A violation at the pinned position is definite; a
  // dead end at an earlier position may just mean the universe is too small,
  // so it never produces a counterexample.
  int deepest_fail = 1;
  bool forced_violation = false;
  std::function<bool(int, bool)> dfs = [&](int k, bool antecedent) -> bool {
    if (k > m) return true;
    if (!antecedent) return true;  // every later condition is vacuous
    const Config& ck = inst.premises[static_cast<size_t>(k - 1)].config;
    const Result& rk = inst.premises[static_cast<size_t>(k - 1)].result;
    if (k == m) {
      if (P.holds(idx, ck)) return true;
      deepest_fail = std::max(deepest_fail, k);
      forced_violation = true;
      return false;
    }
    for (const PredicateIndex& cand : P.index_universe(ck)) {
      if (!P.holds(cand, ck)) continue;
      if (dfs(k + 1, P.holds(cand, rk.cfg))) return true;
    }
    deepest_fail = std::max(deepest_fail, k);
    return false;
  };
  if (dfs(1, true)) return CheckResult::pass();
  if (forced_violation)
    return CheckResult::fail(Counterexample{
        inst.config.text(), idx.text(), inst.rule_id, m,
        "no witness tuple satisfies the chain; premises: " + premises_text(inst)});
  std::ostringstream note;
  note << "no index in the universe covers premise " << deepest_fail << " of " << inst.rule_id;
  return CheckResult::inconclusive(note.str());
}

CheckResult check_exists_progress(const SemanticsDef& sem, const IndexedPredicate& P,
                                  const Config& c) {
  (void)P;
  if (sem.is_result(c))
    throw std::invalid_argument("check_exists_progress: results are excluded");
  if (!sem.open_rules(c).empty()) return CheckResult::pass();
  return CheckResult::fail(
      Counterexample{c.text(), "", "", 0, "no rule concludes this configuration"});
}

CheckResult check_forall_progress(const SemanticsDef& sem, const IndexedPredicate& P,
                                  const RuleInstance& inst, const Bounds& b) {
  (void)P;
  Evaluator ev(sem);
  for (int k = 1; k <= inst.arity(); ++k) {
    // The condition at position k assumes the earlier premises derivable.
    bool prefix_derivable = true;
    for (int h = 1; h < k && prefix_derivable; ++h) {
      const Judgment& jh = inst.premises[static_cast<size_t>(h - 1)];
      prefix_derivable = ev.eval_all(jh.config, b.eval_depth).count(jh.result) > 0;
    }
    if (!prefix_derivable) continue;
    std::vector<RuleState> bundle = replay_prefix(sem, inst, k);
    if (bundle.empty()) continue;  // the instance does not reach this position
    const Config& ck = inst.premises[static_cast<size_t>(k - 1)].config;
    for (const Result& r : ev.eval_all(ck, b.eval_depth)) {
      bool accepted = false;
      for (const RuleState& st : bundle) {
        if (!feed(st, r).rejected()) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        std::ostringstream note;
        note << "result " << r.text() << " of premise configuration " << ck.text()
             << " is rejected by every rule sharing the prefix";
        return CheckResult::fail(
            Counterexample{inst.config.text(), "", inst.rule_id, k, note.str()});
      }
    }
  }
  return CheckResult::pass();
}

CheckResult check_progress_may(const SemanticsDef& sem, const IndexedPredicate& P,
                               const Config& c, const Bounds& b) {
  (void)P;
  if (sem.is_result(c))
    throw std::invalid_argument("check_progress_may: results are excluded");
  Evaluator ev(sem);
  bool boundary = false;

  // Walks one schedule feeding derivable accepted results; succeeds when the
  // schedule completes or its first result-less premise does not converge.
  std::function<bool(const RuleState&)> walk = [&](const RuleState& st) -> bool {
    std::set<Result> results = ev.eval_all(st.current(), b.eval_depth);
    if (results.empty()) return true;  // the premise configuration does not converge
    bool any = false;
    for (const Result& r : results) {
      FeedOutcome fo = feed(st, r);
      if (fo.rejected()) continue;
      any = true;
      if (fo.concluded()) return true;
      if (walk(*fo.next)) return true;
    }
    if (!any && b.eval_depth > 4) {
      // every derivable result is rejected; a depth artifact would show up as
      // instability of the result set near the bound
      std::set<Result> shallow = ev.eval_all(st.current(), b.eval_depth - 4);
      if (shallow != results) boundary = true;
    }
    return false;
  };

  for (const RuleState& st : sem.open_rules(c))
    if (walk(st)) return CheckResult::pass();
  if (boundary)
    return CheckResult::inconclusive("premise derivability unstable near the depth bound");
  return CheckResult::fail(Counterexample{
      c.text(), "", "", 0,
      "no schedule completes on derivable premises or stalls on a divergent one"});
}

CheckResult check_preservation_global(const SemanticsDef& sem, const IndexedPredicate& P,
                                      const Config& c, const PredicateIndex& idx, int depth) {
  if (!P.holds(idx, c))
    throw std::invalid_argument("check_preservation_global: predicate does not hold");
  Evaluator ev(sem);
  for (const Result& r : ev.eval_all(c, depth)) {
    if (!P.holds(idx, r.cfg)) {
      std::ostringstream note;
      note << "result " << r.text() << " escapes the predicate";
      return CheckResult::fail(Counterexample{c.text(), idx.text(), "", 0, note.str()});
    }
  }
  return CheckResult::pass();
}

std::vector<RuleInstance> materialize_instances(Evaluator& ev, const Config& c,
                                                const std::vector<Result>& pool,
                                                const Bounds& b) {
  std::vector<RuleInstance> out;
  std::set<std::string> seen;
  const SemanticsDef& sem = ev.semantics();
  if (sem.is_result(c)) return out;

  std::function<void(const RuleState&, std::vector<Judgment>&)> dfs =
      [&](const RuleState& st, std::vector<Judgment>& prem) {
        if (static_cast<int>(out.size()) >= b.instance_count) return;
        std::vector<Result> candidates;
        std::set<std::string> cand_seen;
        for (const Result& r : ev.eval_all(st.current(), b.eval_depth)) {
          if (cand_seen.insert(r.text()).second) candidates.push_back(r);
        }
        for (const Result& r : pool) {
          if (cand_seen.insert(r.text()).second) candidates.push_back(r);
        }
        for (const Result& r : candidates) {
          if (static_cast<int>(out.size()) >= b.instance_count) return;
          FeedOutcome fo = feed(st, r);
          if (fo.rejected()) continue;
          prem.push_back(Judgment{st.current(), r});
          if (fo.concluded()) {
            RuleInstance inst{st.rule_id(), c, prem};
            std::string key = inst.rule_id + '|' + premises_text(inst);
            if (seen.insert(std::move(key)).second) out.push_back(std::move(inst));
          } else {
            dfs(*fo.next, prem);
          }
          prem.pop_back();
        }
      };

  for (const RuleState& st : sem.open_rules(c)) {
    std::vector<Judgment> prem;
    dfs(st, prem);
  }
  return out;
}

namespace {

void tally(Report& rep, const std::string& condition, const CheckResult& r, int max_cex) {
  ConditionTally& t = rep.conditions[condition];
  switch (r.status) {
    case CheckResult::Status::Pass: ++t.pass; break;
    case CheckResult::Status::Inconclusive: ++t.inconclusive; break;
    case CheckResult::Status::Fail:
      ++t.fail;
      if (static_cast<int>(t.counterexamples.size()) < max_cex && r.counterexample)
        t.counterexamples.push_back(*r.counterexample);
      break;
  }
}

}  // namespace

Report run_suite(const SemanticsDef& sem, const IndexedPredicate& P,
                 const std::vector<std::pair<Config, PredicateIndex>>& corpus,
                 const std::vector<Result>& result_pool, const Bounds& b,
                 const SuiteOptions& opts) {
  Report rep;
  rep.semantics_id = sem.id;
  rep.predicate_id = P.id;
  if (!P.report_note.empty()) rep.notes.push_back(P.report_note);
  Evaluator ev(sem);
  AllClassifier pev_classifier(sem);
  WrongClassifier wrong_classifier(sem);

  std::map<std::string, std::vector<RuleInstance>> instance_cache;
  std::set<std::string> config_seen;

  for (const auto& [c, idx] : corpus) {
    ++rep.corpus_size;
    bool first_time = config_seen.insert(c.text()).second;
    bool is_res = sem.is_result(c);

    auto ic = instance_cache.find(c.text());
    if (ic == instance_cache.end())
      ic = instance_cache.emplace(c.text(), materialize_instances(ev, c, result_pool, b)).first;
    const std::vector<RuleInstance>& instances = ic->second;

    // Per-(config, index) checks.
    for (const RuleInstance& inst : instances)
      tally(rep, "S1", check_local_preservation(sem, P, inst, idx, b), opts.max_counterexamples);
    tally(rep, "preservation", check_preservation_global(sem, P, c, idx, b.eval_depth),
          opts.max_counterexamples);

    // Per-config checks.
    if (first_time && !is_res) {
      tally(rep, "S2", check_exists_progress(sem, P, c), opts.max_counterexamples);
      tally(rep, "S4", check_progress_may(sem, P, c, b), opts.max_counterexamples);
      for (const RuleInstance& inst : instances)
        tally(rep, "S3", check_forall_progress(sem, P, inst, b), opts.max_counterexamples);
    }
    if (first_time && opts.end_to_end) {
      AllSummary all = pev_classifier.classify(c, static_cast<int>(b.fuel));
      CheckResult pev_r =
          all.stuck
              ? CheckResult::fail(Counterexample{c.text(), idx.text(), "", 0,
                                                 "a partial-evaluation path is stuck"})
              : CheckResult::pass();
      tally(rep, "pev-stuck-free", pev_r, opts.max_counterexamples);
      WrongSummary wr = wrong_classifier.classify(c, static_cast<int>(b.fuel));
      CheckResult wr_r =
          wr.wrong ? CheckResult::fail(Counterexample{c.text(), idx.text(), "", 0,
                                                      wr.evidence->describe()})
                   : CheckResult::pass();
      tally(rep, "wrong-free", wr_r, opts.max_counterexamples);
    }
  }

  for (auto& [_, t] : rep.conditions)
    std::sort(t.counterexamples.begin(), t.counterexamples.end());
  return rep;
}

}  // namespace bsw
