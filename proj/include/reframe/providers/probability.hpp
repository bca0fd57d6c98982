#pragma once

#include <string_view>
#include <utility>

#include "reframe/providers/provider.hpp"

namespace reframe::providers {

inline constexpr double kAbsentTokenProbability = 1e-6;
inline constexpr int kTopLogprobs = 5;

struct TokenPair {
  double first = 0.5;
  double second = 0.5;
};

/// Probability that the next token after `context` is `option_a` versus
/// `option_b`, renormalized over the pair. Tokens match case-insensitively
/// after stripping leading whitespace; an option missing from the returned
/// logprobs gets kAbsentTokenProbability. Both components are > 0 and sum to 1.
TokenPair token_pair_probability(const CompletionProvider& provider, std::string_view context,
                                 std::string_view option_a, std::string_view option_b);

/// The renormalization step on its own, for a choice already in hand.
TokenPair pair_from_logprobs(const CompletionChoice& choice, std::string_view option_a,
                             std::string_view option_b);

}  // namespace reframe::providers
