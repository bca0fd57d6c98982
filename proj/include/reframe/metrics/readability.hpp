#pragma once

#include <string_view>

namespace reframe::metrics {

struct ReadabilityStats {
  int letters = 0;
  int words = 0;
  int sentences = 0;
  double letters_per_100 = 0.0;    // L
  double sentences_per_100 = 0.0;  // S
};

struct ReadabilityResult {
  double cli = 0.0;
  ReadabilityStats stats;
};

/// Coleman-Liau index, 0.0588 L - 0.296 S - 15.8, where L and S are letters
/// and sentences per 100 words.
///
/// letters: ASCII alphabetic characters. words: whitespace-separated tokens
/// with at least one alphanumeric character. sentences: maximal runs of
/// '.', '?' or '!', at least 1. Throws Error(NoWords) when the text has no
/// words or no letters.
ReadabilityResult readability(std::string_view text);

}  // namespace reframe::metrics
