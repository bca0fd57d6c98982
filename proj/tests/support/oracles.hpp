#pragma once

// Reference computations used to check the library. They are written
// independently of the code under test: plain loops, full sorts, no shared
// helpers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reframe/core/random.hpp"
#include "reframe/core/types.hpp"
#include "reframe/providers/mock.hpp"

namespace oracle {

struct Ranked {
  std::size_t index;
  double score;
};

/// Full scan: cosine(situation) * cosine(thought) over raw vectors, stable
/// sort by score descending with ties at 12 decimal places kept in index order.
std::vector<Ranked> brute_force_retrieve(const std::vector<std::vector<double>>& situations,
                                         const std::vector<std::vector<double>>& thoughts,
                                         const std::vector<double>& query_situation,
                                         const std::vector<double>& query_thought, std::size_t k);

/// Specification of a scripted reasoning tree: each node has a unique
/// statement and the log probabilities the mock assigns to the two option
/// words (absent when the option is not among the returned tokens).
struct TreeSpec {
  std::string statement;
  std::optional<double> logprob_sound;
  std::optional<double> logprob_flawed;
  std::vector<TreeSpec> supporting;
  std::vector<TreeSpec> refuting;
};

/// Random spec with `levels` node levels and `branching` children per side.
TreeSpec random_tree(reframe::Rng& rng, int levels, int branching, const std::string& prefix = "n");

/// Scripted completion provider that answers soundness and explanation
/// prompts exactly as `spec` prescribes.
reframe::providers::ScriptedCompletionProvider provider_for(const TreeSpec& spec, const reframe::ThoughtRecord& record);

/// Bottom-up evaluation of the reasoning-strength recursion with an explicit
/// stack (no recursion), using the floor-and-renormalize probability rule.
double tree_walk_rs(const TreeSpec& spec);

/// Pearson r straight from the textbook formula, two passes.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Mean of cosine similarities over all unordered pairs, by direct loops.
double pairwise_cosine_mean(const std::vector<std::vector<double>>& vectors);

}  // namespace oracle
