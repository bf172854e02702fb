// Part of the bigstep workbench, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsw/config.hpp"
#include "bsw/soundness.hpp"

namespace bsw {

struct GenSpec {
  std::string calculus = "lam";
  int max_size = 5;  // AST node budget; variable occurrences are free
  enum class Mode { Exhaustive, Random } mode = Mode::Exhaustive;
  int count = 100;         // Random only
  std::uint64_t seed = 0;  // Random only
  bool closed = true;
};

/// Lambda-calculus configurations: every closed term up to the size budget in
/// a fixed canonical order, or seeded random terms. with_plus admits the
/// arithmetic extension's construct.
std::vector<Config> gen_lam_terms(const GenSpec& g, bool with_plus);

/// Values for schedule materialization: a mix of well-typed and untypable
/// results.
std::vector<Result> lam_result_pool();

/// Pairs every configuration with the universe indexes it satisfies.
std::vector<std::pair<Config, PredicateIndex>> gen_welltyped(const std::vector<Config>& terms,
                                                             const IndexedPredicate& P,
                                                             int max_pairs_per_config = 4);

}  // namespace bsw

namespace bsw::fj {
class ClassTable;
}

namespace bsw {

/// Java-like configurations over a class table; the calculus follows the
/// table's flavor. Environments and memories are generated empty.
std::vector<Config> gen_fj_terms(const GenSpec& g, const fj::ClassTable& ct);

/// Result values over the table for schedule materialization.
std::vector<Result> fj_result_pool(const fj::ClassTable& ct);

}  // namespace bsw
