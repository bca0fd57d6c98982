#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

inline constexpr int kDefaultNextActions = 5;

std::string render_contains_action_prompt(std::string_view reframe);
std::string render_next_actions_prompt(std::string_view reframe, int k);

/// The extracted action, or nullopt for "None" / "No Action" / an empty reply.
std::optional<std::string> parse_proposed_action(std::string_view completion);

/// Up to `k` nonempty lines with list markers ("1.", "2)", "-", "*") removed.
std::vector<std::string> parse_action_lines(std::string_view completion, int k);

struct ContainsActionResult {
  bool contains = false;
  std::optional<std::string> action;
};

ContainsActionResult contains_action(const providers::CompletionProvider& provider, std::string_view reframe);

/// Mean cosine similarity over all unordered pairs. Needs at least 2 vectors.
double mean_pairwise_cosine(std::span<const providers::EmbeddingVector> vectors);

struct CoherenceResult {
  double coherence = 0.0;  // in [-1, 1]
  std::vector<std::string> actions;
};

/// Throws Error(FewerThanTwoActions) if fewer than 2 actions parse.
CoherenceResult next_action_coherence(const providers::CompletionProvider& provider,
                                      const providers::EmbeddingProvider& embedder, std::string_view reframe,
                                      int k = kDefaultNextActions);

struct ActionabilityResult {
  double score = 0.0;  // contains + (coherence + 1) / 2, in [0, 2]
  bool contains = false;
  std::optional<std::string> action;
  double raw_coherence = 0.0;
  std::vector<std::string> next_actions;
};

/// Combines the two parts; coherence is mapped from [-1, 1] onto [0, 1].
double combine_actionability(bool contains, double coherence);

ActionabilityResult actionability(const providers::CompletionProvider& provider,
                                  const providers::EmbeddingProvider& embedder, std::string_view reframe,
                                  int k = kDefaultNextActions);

}  // namespace reframe::metrics
