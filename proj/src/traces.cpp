// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "bsw/traces.hpp"

#include <sstream>

#include "json.hpp"

namespace bsw {

std::string render_trace(const Trace& t) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    os << t[i].text();
  }
  os << ']';
  return os.str();
}

Trace PeriodicTrace::unroll(size_t n) const {
  Trace out;
  out.reserve(n);
  for (size_t i = 0; i < prefix.size() && out.size() < n; ++i) out.push_back(prefix[i]);
  while (out.size() < n)
    for (size_t i = 0; i < cycle.size() && out.size() < n; ++i) out.push_back(cycle[i]);
  return out;
}

namespace {

void flatten_complete(const CompleteTree& t, Trace& out) {
  if (t.is_axiom()) {
    out.push_back(t.root.config);  // the axiom r => r contributes just r
    return;
  }
  out.push_back(t.root.config);
  for (const CompleteTree& ch : t.children) flatten_complete(ch, out);
}

void flatten_partial(const PartialTree& t, Trace& out) {
  out.push_back(t.config);
  for (const TreePtr& ch : t.children) flatten_partial(*ch, out);
}

}  // namespace

Trace finite_trace(const CompleteTree& tree) {
  Trace out;
  flatten_complete(tree, out);
  return out;
}

Trace trace_prefix(const TreePtr& t) {
  Trace out;
  flatten_partial(*t, out);
  return out;
}

namespace {

struct MemberEdge {
  Trace segment;  // member config followed by the premise traces before k
  Config next;    // the k-th premise configuration (again a member)
};

// Walks one schedule feeding derivable accepted results; succeeds if some
// choice of prefix results brings premise k's configuration back into the set.
std::optional<MemberEdge> walk_member(Evaluator& ev, const DivergenceWitness& w,
                                      const RuleState& start, int k, int depth, Trace seg,
                                      std::string& why, bool& depth_limited) {
  struct Frame {
    RuleState state;
    Trace seg;
  };
  std::function<std::optional<MemberEdge>(const RuleState&, Trace)> go =
      [&](const RuleState& st, Trace acc) -> std::optional<MemberEdge> {
    if (st.position() == k) {
      if (w.members.count(st.current()) == 0) {
        std::ostringstream os;
        os << "hypothesis (2) fails: premise-" << k << " configuration " << st.current().text()
           << " is not in the witness set";
        why = os.str();
        return std::nullopt;
      }
      return MemberEdge{std::move(acc), st.current()};
    }
    auto results = ev.eval_all(st.current(), depth);
    if (results.empty()) {
      std::ostringstream os;
      os << "hypothesis (1) fails: premise " << st.position() << " (" << st.current().text()
         << ") has no derivation within depth " << depth;
      why = os.str();
      depth_limited = true;
      return std::nullopt;
    }
    bool any_accepted = false;
    for (const Result& r : results) {
      FeedOutcome fo = feed(st, r);
      if (fo.rejected()) continue;
      any_accepted = true;
      if (!fo.continued()) continue;  // schedule ended before reaching k
      auto sub = ev.prove_judgment(st.current(), r, depth);
      Trace acc2 = acc;
      Trace tr = finite_trace(*sub);
      acc2.insert(acc2.end(), tr.begin(), tr.end());
      if (auto edge = go(*fo.next, std::move(acc2))) return edge;
    }
    if (why.empty()) {
      std::ostringstream os;
      if (any_accepted)
        os << "schedule concludes before premise " << k;
      else
        os << "hypothesis (1) fails: no derivable result of " << st.current().text()
           << " is accepted at premise " << st.position();
      why = os.str();
    }
    return std::nullopt;
  };
  return go(start, std::move(seg));
}

}  // namespace

WitnessVerdict verify_divergence_witness(const SemanticsDef& sem, const DivergenceWitness& w,
                                         int depth) {
  WitnessVerdict verdict;
  if (w.members.empty()) {
    verdict.reason = "empty witness set";
    return verdict;
  }
  Evaluator ev(sem);
  std::map<Config, MemberEdge> edges;
  for (const auto& [member, choice] : w.members) {
    if (sem.is_result(member)) {
      verdict.reason = "member " + member.text() + " is a result";
      return verdict;
    }
    std::optional<RuleState> start;
    for (RuleState st : sem.open_rules(member))
      if (st.rule_id() == choice.rule_id) {
        start = std::move(st);
        break;
      }
    if (!start) {
      verdict.reason =
          "member " + member.text() + " has no schedule named '" + choice.rule_id + "'";
      return verdict;
    }
    if (choice.index < 1) {
      verdict.reason = "member " + member.text() + " has index < 1";
      return verdict;
    }
    std::string why;
    bool depth_limited = false;
    auto edge =
        walk_member(ev, w, *start, choice.index, depth, Trace{member}, why, depth_limited);
    if (!edge) {
      verdict.reason = member.text() + ": " + (why.empty() ? "hypotheses not satisfied" : why);
      verdict.depth_limited = depth_limited;
      return verdict;
    }
    edges.emplace(member, std::move(*edge));
  }

  // Solve the guarded system: each member's trace follows its successor chain
  // into the (eventually revisited) cycle.
  for (const auto& [member, _] : w.members) {
    std::vector<Config> chain;
    std::map<Config, size_t> seen;
    Config cur = member;
    while (seen.count(cur) == 0) {
      seen[cur] = chain.size();
      chain.push_back(cur);
      cur = edges.at(cur).next;
    }
    size_t cycle_start = seen[cur];
    PeriodicTrace pt;
    for (size_t i = 0; i < chain.size(); ++i) {
      const Trace& seg = edges.at(chain[i]).segment;
      Trace& dst = i < cycle_start ? pt.prefix : pt.cycle;
      dst.insert(dst.end(), seg.begin(), seg.end());
    }
    verdict.traces.emplace(member, std::move(pt));
  }
  verdict.valid = true;
  return verdict;
}

DivergenceWitness parse_witness_json(const std::string& text,
                                     const std::function<Config(const std::string&)>& parse) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("members") || !j["members"].is_array())
    throw std::runtime_error("witness file: expected an object with a 'members' array");
  DivergenceWitness w;
  for (const auto& m : j["members"]) {
    if (!m.contains("config") || !m.contains("rule") || !m.contains("index"))
      throw std::runtime_error("witness member: 'config', 'rule' and 'index' are required");
    Config c = parse(m["config"].get<std::string>());
    w.members[c] = DivergenceWitness::Choice{m["rule"].get<std::string>(), m["index"].get<int>()};
  }
  return w;
}

std::string witness_to_json(const DivergenceWitness& w) {
  nlohmann::ordered_json j;
  j["members"] = nlohmann::ordered_json::array();
  for (const auto& [c, choice] : w.members) {
    nlohmann::ordered_json m;
    m["config"] = c.text();
    m["rule"] = choice.rule_id;
    m["index"] = choice.index;
    j["members"].push_back(m);
  }
  return j.dump(2);
}

}  // namespace bsw
