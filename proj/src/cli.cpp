// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bsw/evaluator.hpp"
#include "bsw/fj/presets.hpp"
#include "bsw/fj/types.hpp"
#include "bsw/lambda/semantics.hpp"
#include "bsw/lambda/types.hpp"
#include "bsw/pev.hpp"
#include "bsw/wrong.hpp"
#include "json.hpp"

namespace bsw::cli {

using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// --- calculus registry ------------------------------------------------------

CalculusHandle make_lam(const std::string& id) {
  CalculusHandle h;
  h.id = id;
  lam::SemanticsOptions opts;
  opts.with_succ = id != "lam-no-succ";
  opts.with_plus = id == "lam-arith";
  h.sem = lam::lam_semantics(opts);
  h.parse = [](const std::string& s) { return lam::to_config(lam::parse_expr(s)); };
  h.typesystems = {{"simple", lam::simple_types_predicate()},
                   {"simple-fool", lam::simple_types_fool_predicate()},
                   {"union", lam::iu_types_predicate(false)},
                   {"union-orE", lam::iu_types_predicate(true)}};
  bool with_plus = opts.with_plus;
  h.generate = [with_plus](const GenSpec& g) { return gen_lam_terms(g, with_plus); };
  h.pool = lam_result_pool();
  h.shrink = [](const Config& c) {
    std::vector<Config> out;
    for (const lam::ExprPtr& sub : lam::subexprs(lam::expr_of(c)))
      if (sub != lam::expr_of(c) && lam::is_closed(sub)) out.push_back(lam::to_config(sub));
    return out;
  };
  std::vector<const char*> seeds = {"(fun x . x x) (fun x . x x)",
                                    "succ ((fun x . x x) (fun x . x x))", "0 0",
                                    "succ (succ (succ 0))"};
  if (opts.with_plus) seeds.push_back("+ (1 (+) 2) (1 (+) 2)");
  for (const char* s : seeds) h.seeds.push_back(h.parse(s));
  return h;
}

CalculusHandle make_fj(const std::string& id, const std::string& table_source) {
  fj::Flavor flavor = id == "fjl"   ? fj::Flavor::FjLambda
                      : id == "fjo" ? fj::Flavor::FjUnion
                                    : fj::Flavor::FjImperative;
  std::string src = table_source;
  if (src.empty())
    src = flavor == fj::Flavor::FjLambda   ? fj::presets::fjl_table()
          : flavor == fj::Flavor::FjUnion ? fj::presets::fjo_table()
                                           : fj::presets::fji_table();
  fj::TablePtr ct = fj::load_table_ptr(src, flavor);

  CalculusHandle h;
  h.id = id;
  auto embed = [flavor](fj::ExprPtr e) {
    switch (flavor) {
      case fj::Flavor::FjLambda: return fj::env_config({}, std::move(e));
      case fj::Flavor::FjUnion: return fj::plain_config(std::move(e));
      case fj::Flavor::FjImperative: return fj::mem_config({}, std::move(e));
    }
    return fj::plain_config(std::move(e));
  };
  switch (flavor) {
    case fj::Flavor::FjLambda:
      h.sem = fj::fjl_semantics(ct);
      h.typesystems = {{"fj", fj::fjl_predicate(ct)}};
      break;
    case fj::Flavor::FjUnion:
      h.sem = fj::fjo_semantics(ct);
      h.typesystems = {{"fj", fj::fjo_predicate(ct)}};
      break;
    case fj::Flavor::FjImperative:
      h.sem = fj::fji_semantics(ct);
      h.typesystems = {{"fj", fj::fji_predicate(ct)}};
      break;
  }
  h.parse = [embed](const std::string& s) { return embed(fj::parse_fj_expr(s)); };
  h.generate = [ct](const GenSpec& g) { return gen_fj_terms(g, *ct); };
  h.pool = fj_result_pool(*ct);
  h.shrink = [embed](const Config& c) {
    std::vector<Config> out;
    const fj::FjConfig& fc = fj::fj_of(c);
    if (!fc.expr) return out;
    for (const fj::ExprPtr& sub : fj::subexprs(fc.expr)) {
      if (sub == fc.expr) continue;
      std::set<std::string> fv;
      fj::free_vars(sub, fv);
      if (!fv.empty()) continue;
      bool runtime = false;
      for (const fj::ExprPtr& inner : fj::subexprs(sub))
        if (inner->kind == fj::Expr::Kind::ObjectId) runtime = true;
      if (!runtime) out.push_back(embed(sub));
    }
    return out;
  };
  switch (flavor) {
    case fj::Flavor::FjLambda:
      if (ct->has_class("C") && ct->is_functional_interface("I")) {
        h.seeds.push_back(h.parse("new C(<I> (x) -> x)"));
        h.seeds.push_back(h.parse("new C(<I> (x) -> x).m(<I> (x) -> x)"));
      }
      break;
    case fj::Flavor::FjUnion:
      if (ct->has_class("E"))
        h.seeds.push_back(h.parse(
            "new E().eq(if false then new C(new P()) else new D(new Q()), "
            "if false then new C(new P()) else new D(new Q()))"));
      break;
    case fj::Flavor::FjImperative:
      if (ct->has_class("B")) h.seeds.push_back(h.parse("new B(new B(new A()).get(new A2()))"));
      break;
  }
  return h;
}

}  // namespace

std::vector<std::string> calculus_ids() {
  return {"lam", "lam-no-succ", "lam-arith", "fjl", "fjo", "fji"};
}

CalculusHandle make_calculus(const std::string& id, const std::string& table_source) {
  if (id == "lam" || id == "lam-no-succ" || id == "lam-arith") return make_lam(id);
  if (id == "fjl" || id == "fjo" || id == "fji") return make_fj(id, table_source);
  throw std::invalid_argument("unknown calculus: " + id);
}

// --- cross-checks ------------------------------------------------------------

namespace {

struct ValidatingObserver : RunObserver {
  XcheckStats* stats;
  explicit ValidatingObserver(XcheckStats* s) : stats(s) {}
  void on_step(const TreePtr& before, const StepEvent& ev, const TreePtr& after) override {
    ++stats->steps_validated;
    if (!tree_leq(before, after) || tree_leq(after, before)) {
      stats->violations.push_back("step does not strictly grow the tree at " +
                                  before->config.text() + " (" + ev.schema + ")");
      return;
    }
    if (auto why = tree_invariant_violation(after))
      stats->violations.push_back(*why);
    if (!after->unknown() && !is_complete(after))
      stats->violations.push_back("result-rooted tree incomplete at " + after->config.text());
  }
};

}  // namespace

XcheckStats xcheck_corpus(const SemanticsDef& sem, const std::vector<Config>& corpus,
                          const XcheckOptions& opts) {
  return xcheck_corpus_ref(sem, sem, corpus, opts);
}

XcheckStats xcheck_corpus_ref(const SemanticsDef& sem, const SemanticsDef& reference,
                              const std::vector<Config>& corpus, const XcheckOptions& opts) {
  XcheckStats stats;
  Evaluator ev(reference);
  AllClassifier pev(sem);
  WrongClassifier wrong(sem);
  ValidatingObserver observer(&stats);
  const size_t max_reports = 8;

  auto report = [&](const Config& c, const std::string& what) {
    if (stats.disagreements.size() < max_reports)
      stats.disagreements.push_back(c.text() + ": " + what);
    else if (stats.disagreements.size() == max_reports)
      stats.disagreements.push_back("...");
  };

  for (const Config& c : corpus) {
    ++stats.checked;
    std::set<Result> expected = ev.eval_all(c, opts.depth);

    AllSummary ps = pev.classify(c, static_cast<int>(opts.fuel));
    if (ps.results != expected) {
      ++stats.pev_mismatches;
      report(c, "tree-reduction results differ from the evaluator");
    }
    WrongSummary ws = wrong.classify(c, static_cast<int>(opts.fuel));
    if (ws.values != expected) {
      ++stats.wrong_mismatches;
      report(c, "wrong-extension values differ from the evaluator");
    }
    if (ps.stuck != ws.wrong) {
      ++stats.stuck_wrong_mismatches;
      report(c, "stuck and Wrong disagree");
    }
    if (ps.stuck) ++stats.stuck;
    if (ps.exhausted) ++stats.exhausted;

    // finite traces exist exactly for derivable results and end in them
    for (const Result& r : expected) {
      auto tree = ev.prove_judgment(c, r, opts.depth);
      if (!tree) {
        ++stats.trace_mismatches;
        report(c, "derivable result " + r.text() + " has no materialized derivation");
        continue;
      }
      Trace tr = finite_trace(*tree);
      if (tr.empty() || tr.front() != c || !(Result{tr.back()} == r)) {
        ++stats.trace_mismatches;
        report(c, "finite trace does not run from the configuration to " + r.text());
      }
    }

    if (opts.validate_trees) {
      RunOptions ro;
      ro.observer = &observer;
      run_all(sem, c, opts.fuel, opts.validate_budget, ro);
    }
    if (stats.violations.size() > max_reports)
      stats.violations.resize(max_reports);
  }
  return stats;
}

// --- reports -----------------------------------------------------------------

namespace {

ordered_json report_json(const Report& rep, const Bounds& b) {
  ordered_json j;
  j["semantics"] = rep.semantics_id;
  j["typesystem"] = rep.predicate_id;
  j["bounds"] = {{"eval_depth", b.eval_depth},
                 {"result_pool_size", b.result_pool_size},
                 {"instance_count", b.instance_count},
                 {"seed", b.random_seed},
                 {"fuel", b.fuel}};
  j["corpus_size"] = rep.corpus_size;
  ordered_json conds = ordered_json::object();
  for (const auto& [name, tally] : rep.conditions) {
    ordered_json cj;
    cj["pass"] = tally.pass;
    cj["fail"] = tally.fail;
    cj["inconclusive"] = tally.inconclusive;
    ordered_json cex = ordered_json::array();
    for (const Counterexample& x : tally.counterexamples) {
      cex.push_back({{"config", x.config},
                     {"index", x.index},
                     {"rule_id", x.rule_id},
                     {"premise", x.premise},
                     {"note", x.note}});
    }
    cj["counterexamples"] = cex;
    conds[name] = cj;
  }
  j["conditions"] = conds;
  j["notes"] = rep.notes;
  return j;
}

void print_report_text(const Report& rep, std::ostream& out) {
  out << "suite: " << rep.semantics_id << " / " << rep.predicate_id
      << "  (corpus " << rep.corpus_size << ")\n";
  for (const auto& [name, tally] : rep.conditions) {
    out << "  " << name << ": pass " << tally.pass << ", fail " << tally.fail
        << ", inconclusive " << tally.inconclusive << "\n";
    for (const Counterexample& x : tally.counterexamples) {
      out << "    counterexample: " << x.config;
      if (!x.index.empty()) out << " : " << x.index;
      if (!x.rule_id.empty()) out << " [" << x.rule_id << "]";
      if (x.premise > 0) out << " at premise " << x.premise;
      if (!x.note.empty()) out << " -- " << x.note;
      out << "\n";
    }
  }
  for (const std::string& n : rep.notes) out << "  note: " << n << "\n";
}

// Replaces config-scoped counterexamples with their smallest failing
// subconfiguration.
void minimize_report(const CalculusHandle& h, const IndexedPredicate& P, Report& rep,
                     const Bounds& b, const std::map<std::string, Config>& by_text) {
  Evaluator shrink_ev(h.sem);
  AllClassifier pev(h.sem);
  WrongClassifier wrong(h.sem);

  auto holds_some = [&](const Config& c, PredicateIndex& out) {
    for (const PredicateIndex& i : P.index_universe(c))
      if (P.holds(i, c)) {
        out = i;
        return true;
      }
    return false;
  };

  auto still_fails = [&](const std::string& cond, const Config& c) -> bool {
    PredicateIndex idx;
    if (!holds_some(c, idx)) return false;
    if (cond == "S2")
      return !h.sem.is_result(c) && check_exists_progress(h.sem, P, c).failed();
    if (cond == "S4") return !h.sem.is_result(c) && check_progress_may(h.sem, P, c, b).failed();
    if (cond == "preservation") {
      for (const PredicateIndex& i : P.index_universe(c))
        if (P.holds(i, c) && check_preservation_global(h.sem, P, c, i, b.eval_depth).failed())
          return true;
      return false;
    }
    if (cond == "pev-stuck-free")
      return pev.classify(c, static_cast<int>(b.fuel)).stuck;
    if (cond == "wrong-free")
      return wrong.classify(c, static_cast<int>(b.fuel)).wrong;
    return false;
  };

  for (auto& [cond, tally] : rep.conditions) {
    if (cond == "S1" || cond == "S3") continue;  // instance-scoped
    for (Counterexample& cex : tally.counterexamples) {
      auto it = by_text.find(cex.config);
      if (it == by_text.end()) continue;
      Config cur = it->second;
      bool shrunk = true;
      while (shrunk) {
        shrunk = false;
        std::vector<Config> candidates = h.shrink(cur);
        std::sort(candidates.begin(), candidates.end(),
                  [](const Config& a, const Config& b2) {
                    return a.text().size() < b2.text().size();
                  });
        for (const Config& cand : candidates) {
          if (cand.text().size() >= cur.text().size()) break;
          if (still_fails(cond, cand)) {
            cur = cand;
            shrunk = true;
            break;
          }
        }
      }
      if (!(cur == it->second)) {
        cex.note += " (minimized from " + cex.config + ")";
        cex.config = cur.text();
      }
    }
  }
}

// --- commands ---------------------------------------------------------------

std::string read_term_input(const RunConfig& rc, const std::string& input,
                            std::string& table_source) {
  // file inputs may carry a class table before the main expression
  std::ifstream probe(input);
  if (!probe.good()) return input;  // inline term text
  std::string text = slurp(input);
  if (rc.calculus.rfind("fj", 0) == 0) {
    fj::Program p = fj::parse_program(text);
    if (!p.classes.empty() || !p.interfaces.empty()) {
      if (!p.main) throw std::runtime_error("program file has no main expression");
      table_source = text;
      return fj::print_expr(p.main);
    }
  }
  return text;
}

int cmd_eval(const RunConfig& rc, const std::string& input, std::ostream& out,
             std::ostream& err) {
  std::string table_source = rc.table.empty() ? "" : slurp(rc.table);
  std::string term_text;
  try {
    term_text = read_term_input(rc, input, table_source);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CalculusHandle h;
  Config c;
  try {
    h = make_calculus(rc.calculus, table_source);
    c = h.parse(term_text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  ordered_json j;
  j["command"] = "eval";
  j["calculus"] = rc.calculus;
  j["term"] = c.text();
  j["mode"] = rc.mode;

  if (rc.mode == "standard") {
    Evaluator ev(h.sem);
    std::set<Result> results = ev.eval_all(c, rc.depth);
    if (!rc.json) {
      if (results.empty()) {
        out << "no derivation within depth " << rc.depth << "\n";
      } else {
        out << "results:";
        for (const Result& r : results) out << ' ' << r.text();
        out << "\n";
      }
    }
    ordered_json rs = ordered_json::array();
    for (const Result& r : results) rs.push_back(r.text());
    j["results"] = rs;
    if (rc.trace && !results.empty()) {
      auto tree = ev.prove_one(c, rc.depth);
      Trace tr = finite_trace(*tree);
      if (!rc.json) out << "trace: " << render_trace(tr) << "\n";
      ordered_json tj = ordered_json::array();
      for (const Config& x : tr) tj.push_back(x.text());
      j["trace"] = tj;
    }
  } else if (rc.mode == "pev" && rc.strategy == "all") {
    AllOutcomes all = run_all(h.sem, c, rc.fuel, 4096);
    ordered_json rs = ordered_json::array();
    for (const Result& r : all.converged_results()) rs.push_back(r.text());
    j["results"] = rs;
    j["stuck"] = all.any_stuck();
    j["exhausted"] = all.any_exhausted();
    j["paths"] = all.paths;
    if (!rc.json) {
      out << "converged:";
      for (const Result& r : all.converged_results()) out << ' ' << r.text();
      out << (all.any_stuck() ? ", some path stuck" : "")
          << (all.any_exhausted() ? ", some path exhausted" : "") << " (" << all.paths
          << " paths)\n";
    }
  } else if (rc.mode == "pev") {
    RunOptions ro;
    ro.log_events = true;
    Strategy s = parse_strategy(rc.strategy, rc.seed);
    RunOutcome o = run(h.sem, c, rc.fuel, s, ro);
    const char* kinds[] = {"Converged", "Stuck", "Exhausted"};
    j["outcome"] = kinds[static_cast<int>(o.kind)];
    j["steps"] = o.steps;
    if (o.result) j["result"] = o.result->text();
    if (!rc.json) {
      out << kinds[static_cast<int>(o.kind)];
      if (o.result) out << ' ' << o.result->text();
      out << " in " << o.steps << " steps\n";
    }
    ordered_json events = ordered_json::array();
    for (const StepEvent& e : o.events) {
      ordered_json ej;
      ej["schema"] = e.schema;
      ej["address"] = e.address;
      ej["rule"] = e.rule_id;
      if (e.opened) ej["opens"] = e.opened->text();
      if (e.fed) ej["fed"] = e.fed->text();
      events.push_back(ej);
      if (!rc.json && rc.trace) {
        out << "  step " << e.schema;
        if (!e.rule_id.empty()) out << " [" << e.rule_id << "]";
        if (e.opened) out << " opens " << e.opened->text();
        if (e.fed) out << " fed " << e.fed->text();
        out << "\n";
      }
    }
    j["events"] = events;
    if (rc.trace && !rc.json) out << render_tree(o.tree);
    Trace tr = trace_prefix(o.tree);
    if (rc.trace && !rc.json) out << "trace: " << render_trace(tr) << "\n";
    ordered_json tj = ordered_json::array();
    for (const Config& x : tr) tj.push_back(x.text());
    j["trace"] = tj;
  } else if (rc.mode == "wrong" && rc.strategy == "all") {
    WrongAllOutcomes all = eval_wrong_all(h.sem, c, rc.fuel, 4096);
    ordered_json rs = ordered_json::array();
    for (const Result& r : all.value_results()) rs.push_back(r.text());
    j["results"] = rs;
    j["wrong"] = all.any_wrong();
    j["exhausted"] = all.any_exhausted();
    if (all.any_wrong()) j["evidence"] = all.wrong->evidence->describe();
    if (!rc.json) {
      out << "values:";
      for (const Result& r : all.value_results()) out << ' ' << r.text();
      if (all.any_wrong()) out << ", Wrong: " << all.wrong->evidence->describe();
      if (all.any_exhausted()) out << ", some path exhausted";
      out << "\n";
    }
  } else if (rc.mode == "wrong") {
    Strategy s = parse_strategy(rc.strategy, rc.seed);
    WrongOutcome o = eval_wrong(h.sem, c, rc.fuel, s);
    if (o.is_value()) {
      j["outcome"] = "Value";
      j["result"] = o.value->text();
      if (!rc.json) out << "Value " << o.value->text() << "\n";
    } else if (o.is_wrong()) {
      j["outcome"] = "Wrong";
      j["evidence"] = o.evidence->describe();
      if (!rc.json) out << "Wrong: " << o.evidence->describe() << "\n";
    } else {
      j["outcome"] = "Exhausted";
      if (!rc.json) out << "Exhausted (fuel " << rc.fuel << ")\n";
    }
  } else {
    err << "error: unknown mode " << rc.mode << "\n";
    return 2;
  }

  if (rc.json) {
    j["generated_at"] = timestamp();
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_check(const RunConfig& rc, const std::string& typesystem, std::ostream& out,
              std::ostream& err) {
  CalculusHandle h;
  try {
    h = make_calculus(rc.calculus, rc.table.empty() ? "" : slurp(rc.table));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const IndexedPredicate* P = nullptr;
  for (const auto& [name, pred] : h.typesystems)
    if (name == typesystem) P = &pred;
  if (!P) {
    err << "error: unknown typesystem " << typesystem << " for " << rc.calculus << "\n";
    return 2;
  }

  GenSpec ex;
  ex.calculus = rc.calculus;
  ex.max_size = rc.size;
  std::vector<Config> terms = h.seeds;
  for (Config& c : h.generate(ex)) terms.push_back(std::move(c));
  GenSpec rnd;
  rnd.calculus = rc.calculus;
  rnd.mode = GenSpec::Mode::Random;
  rnd.count = rc.count;
  rnd.seed = rc.seed;
  rnd.max_size = rc.size + 2;
  for (Config& c : h.generate(rnd)) terms.push_back(std::move(c));

  auto corpus = gen_welltyped(terms, *P, 2);
  std::map<std::string, Config> by_text;
  for (const auto& [c, _] : corpus) by_text.emplace(c.text(), c);

  Bounds b;
  b.eval_depth = rc.depth;
  b.random_seed = rc.seed;
  b.fuel = rc.fuel;
  Report rep = run_suite(h.sem, *P, corpus, h.pool, b);
  minimize_report(h, *P, rep, b, by_text);

  if (rc.json) {
    ordered_json j = report_json(rep, b);
    j["command"] = "check";
    j["generated_at"] = timestamp();
    out << j.dump(2) << "\n";
  } else {
    print_report_text(rep, out);
  }
  if (rep.any_fail()) return 1;
  if (rc.strict && rep.any_inconclusive()) return 1;
  return 0;
}

int cmd_xcheck(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  CalculusHandle h;
  try {
    h = make_calculus(rc.calculus, rc.table.empty() ? "" : slurp(rc.table));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  GenSpec g;
  g.calculus = rc.calculus;
  g.max_size = rc.size;
  std::vector<Config> corpus = h.generate(g);
  XcheckOptions opts;
  opts.depth = rc.depth;
  opts.fuel = rc.fuel;
  XcheckStats stats = xcheck_corpus(h.sem, corpus, opts);

  if (rc.json) {
    ordered_json j;
    j["command"] = "xcheck";
    j["calculus"] = rc.calculus;
    j["size"] = rc.size;
    j["depth"] = opts.depth;
    j["fuel"] = opts.fuel;
    j["checked"] = stats.checked;
    j["stuck"] = stats.stuck;
    j["exhausted"] = stats.exhausted;
    j["steps_validated"] = stats.steps_validated;
    j["disagreements"] = stats.disagreements;
    j["violations"] = stats.violations;
    j["generated_at"] = timestamp();
    out << j.dump(2) << "\n";
  } else {
    out << "xcheck " << rc.calculus << ": " << stats.checked << " configurations, "
        << stats.stuck << " stuck, " << stats.exhausted << " exhausted, "
        << stats.steps_validated << " steps validated\n";
    for (const std::string& d : stats.disagreements) out << "  disagreement: " << d << "\n";
    for (const std::string& v : stats.violations) out << "  violation: " << v << "\n";
    if (stats.ok()) out << "all routes agree\n";
  }
  return stats.ok() ? 0 : 1;
}

int cmd_witness(const RunConfig& rc, const std::string& path, std::ostream& out,
                std::ostream& err) {
  CalculusHandle h;
  DivergenceWitness w;
  try {
    h = make_calculus(rc.calculus, rc.table.empty() ? "" : slurp(rc.table));
    w = parse_witness_json(slurp(path), h.parse);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  WitnessVerdict v = verify_divergence_witness(h.sem, w, rc.depth);
  ordered_json j;
  j["command"] = "witness";
  j["calculus"] = rc.calculus;
  j["valid"] = v.valid;

  bool pev_ok = true;
  ordered_json members = ordered_json::array();
  if (v.valid) {
    for (const auto& [member, pt] : v.traces) {
      // run the member under the witness's schedule choices
      RunOptions ro;
      ro.choose = [&](const Config& at, const std::vector<StepOption>& options) -> int {
        auto it = w.members.find(at);
        if (it != w.members.end()) {
          for (size_t i = 0; i < options.size(); ++i)
            if (options[i].rule_id == it->second.rule_id) return static_cast<int>(i);
        }
        return 0;
      };
      RunOutcome o = run(h.sem, member, rc.fuel, Strategy::first(), ro);
      Trace prefix = trace_prefix(o.tree);
      Trace unrolled = pt.unroll(prefix.size());
      bool match = o.kind != RunOutcome::Kind::Stuck;
      for (size_t i = 0; i + 1 < prefix.size() && match; ++i)
        if (!(prefix[i] == unrolled[i])) match = false;
      pev_ok = pev_ok && match;

      ordered_json mj;
      mj["config"] = member.text();
      mj["rule"] = w.members.at(member).rule_id;
      mj["index"] = w.members.at(member).index;
      ordered_json pj = ordered_json::array();
      for (const Config& x : pt.prefix) pj.push_back(x.text());
      ordered_json cj = ordered_json::array();
      for (const Config& x : pt.cycle) cj.push_back(x.text());
      mj["prefix"] = pj;
      mj["cycle"] = cj;
      mj["pev_agrees"] = match;
      members.push_back(mj);
      if (!rc.json) {
        out << member.text() << ": Valid, cycle " << render_trace(pt.cycle);
        if (!pt.prefix.empty()) out << " after prefix " << render_trace(pt.prefix);
        out << (match ? " (reduction agrees)" : " (reduction DISAGREES)") << "\n";
      }
    }
  } else if (!rc.json) {
    out << "Invalid: " << v.reason << (v.depth_limited ? " (depth-limited)" : "") << "\n";
  }
  j["members"] = members;
  if (!v.valid) {
    j["reason"] = v.reason;
    j["depth_limited"] = v.depth_limited;
  }
  if (rc.json) {
    j["generated_at"] = timestamp();
    out << j.dump(2) << "\n";
  }
  return v.valid && pev_ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"big-step semantics workbench"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--calculus", rc.calculus, "calculus id")
        ->check(CLI::IsMember(calculus_ids()));
    cmd->add_option("--fuel", rc.fuel, "step budget");
    cmd->add_option("--depth", rc.depth, "proof search depth");
    cmd->add_option("--strategy", rc.strategy, "first|random|all")
        ->check(CLI::IsMember({"first", "random", "all"}));
    cmd->add_option("--seed", rc.seed, "random seed");
    cmd->add_option("--size", rc.size, "exhaustive corpus size");
    cmd->add_option("--count", rc.count, "random corpus size");
    cmd->add_option("--table", rc.table, "class table file (.fj)");
    cmd->add_flag("--json", rc.json, "machine-readable output");
    cmd->add_flag("--strict", rc.strict, "inconclusive results are failures");
    cmd->add_flag("--trace", rc.trace, "print traces / step logs");
  };

  std::string input, typesystem, witness_file;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a term or program");
  add_common(eval);
  eval->add_option("--mode", rc.mode, "standard|pev|wrong")
      ->check(CLI::IsMember({"standard", "pev", "wrong"}));
  eval->add_option("input", input, "term text or file")->required();

  CLI::App* check = app.add_subcommand("check", "run the soundness condition suite");
  add_common(check);
  check->add_option("typesystem", typesystem, "type system id")->required();

  CLI::App* xcheck = app.add_subcommand("xcheck", "cross-check the derived semantics");
  add_common(xcheck);

  CLI::App* witness = app.add_subcommand("witness", "verify a divergence witness file");
  add_common(witness);
  witness->add_option("file", witness_file, "witness JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(eval)) return cmd_eval(rc, input, out, err);
    if (app.got_subcommand(check)) return cmd_check(rc, typesystem, out, err);
    if (app.got_subcommand(xcheck)) return cmd_xcheck(rc, out, err);
    if (app.got_subcommand(witness)) return cmd_witness(rc, witness_file, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace bsw::cli
