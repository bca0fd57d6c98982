#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reframe::stats {

/// Lowercased whitespace tokens, shared by BLEU and ROUGE.
std::vector<std::string> overlap_tokens(std::string_view text);

inline constexpr double kBleuEpsilon = 1e-9;

/// Sentence BLEU: geometric mean of clipped n-gram precisions times the
/// brevity penalty. Zero match counts are replaced by kBleuEpsilon. A
/// candidate shorter than max_n tokens is scored on the orders it has.
double bleu(std::string_view candidate, const std::vector<std::string>& references, int max_n = 4);

/// Corpus BLEU over aligned candidates and reference lists: counts and
/// lengths are pooled before the geometric mean.
double corpus_bleu(const std::vector<std::string>& candidates,
                   const std::vector<std::vector<std::string>>& references, int max_n = 4);

enum class RougeVariant { R1, RL };

/// F1 of unigram overlap (R1) or longest common subsequence (RL).
double rouge(std::string_view candidate, std::string_view reference, RougeVariant variant);

}  // namespace reframe::stats
