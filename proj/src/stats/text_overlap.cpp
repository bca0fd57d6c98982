#include "reframe/stats/text_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "reframe/core/error.hpp"
#include "reframe/core/text.hpp"

namespace reframe::stats {

namespace {

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, long>;

NgramCounts ngram_counts(const std::vector<std::string>& tokens, std::size_t n)
{
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

struct BleuCounts {
  std::vector<long> matches;
  std::vector<long> totals;
  long candidate_len = 0;
  long reference_len = 0;
};

/// Closest reference length, shorter one on ties.
long closest_length(long c, const std::vector<std::vector<std::string>>& refs)
{
  long best = -1;
  for (const auto& r : refs) {
    const auto len = static_cast<long>(r.size());
    if (best < 0 || std::abs(len - c) < std::abs(best - c) || (std::abs(len - c) == std::abs(best - c) && len < best)) {
      best = len;
    }
  }
  return best;
}

void accumulate(BleuCounts& acc, const std::vector<std::string>& cand, const std::vector<std::string>& references,
                int max_n)
{
  if (references.empty()) throw Error(ErrorCode::InvalidInput, "BLEU needs at least one reference");
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(overlap_tokens(r));
  for (int n = 1; n <= max_n; ++n) {
    const auto counts = ngram_counts(cand, static_cast<std::size_t>(n));
    std::vector<NgramCounts> ref_counts;
    for (const auto& r : refs) ref_counts.push_back(ngram_counts(r, static_cast<std::size_t>(n)));
    long matched = 0;
    long total = 0;
    for (const auto& [gram, count] : counts) {
      long max_ref = 0;
      for (const auto& rc : ref_counts) {
        const auto it = rc.find(gram);
        if (it != rc.end()) max_ref = std::max(max_ref, it->second);
      }
      matched += std::min(count, max_ref);
      total += count;
    }
    acc.matches[static_cast<std::size_t>(n - 1)] += matched;
    acc.totals[static_cast<std::size_t>(n - 1)] += total;
  }
  acc.candidate_len += static_cast<long>(cand.size());
  acc.reference_len += closest_length(static_cast<long>(cand.size()), refs);
}

double finish(const BleuCounts& acc)
{
  double log_sum = 0.0;
  int orders = 0;
  for (std::size_t i = 0; i < acc.totals.size(); ++i) {
    if (acc.totals[i] == 0) continue;  // candidate has no n-grams of this order
    const double m = acc.matches[i] == 0 ? kBleuEpsilon : static_cast<double>(acc.matches[i]);
    log_sum += std::log(m / static_cast<double>(acc.totals[i]));
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double c = static_cast<double>(acc.candidate_len);
  const double r = static_cast<double>(acc.reference_len);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return std::clamp(bp * std::exp(log_sum / orders), 0.0, 1.0);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double f1(double overlap, double cand_len, double ref_len)
{
  if (overlap <= 0.0) return 0.0;
  const double p = overlap / cand_len;
  const double r = overlap / ref_len;
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<std::string> overlap_tokens(std::string_view text)
{
  return text::split_whitespace(text::to_lower(text));
}

double bleu(std::string_view candidate, const std::vector<std::string>& references, int max_n)
{
  if (max_n < 1) throw Error(ErrorCode::InvalidInput, "max_n must be >= 1");
  const auto cand = overlap_tokens(candidate);
  if (cand.empty()) throw Error(ErrorCode::InvalidInput, "BLEU candidate is empty");
  BleuCounts acc{std::vector<long>(static_cast<std::size_t>(max_n), 0), std::vector<long>(static_cast<std::size_t>(max_n), 0),
                 0, 0};
  accumulate(acc, cand, references, max_n);
  return finish(acc);
}

double corpus_bleu(const std::vector<std::string>& candidates, const std::vector<std::vector<std::string>>& references,
                   int max_n)
{
  if (max_n < 1) throw Error(ErrorCode::InvalidInput, "max_n must be >= 1");
  if (candidates.size() != references.size()) {
    throw Error(ErrorCode::InvalidInput, "candidates and references differ in length");
  }
  if (candidates.empty()) throw Error(ErrorCode::InvalidInput, "corpus BLEU needs at least one candidate");
  BleuCounts acc{std::vector<long>(static_cast<std::size_t>(max_n), 0), std::vector<long>(static_cast<std::size_t>(max_n), 0),
                 0, 0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto cand = overlap_tokens(candidates[i]);
    if (cand.empty()) throw Error(ErrorCode::InvalidInput, "BLEU candidate is empty");
    accumulate(acc, cand, references[i], max_n);
  }
  return finish(acc);
}

double rouge(std::string_view candidate, std::string_view reference, RougeVariant variant)
{
  const auto c = overlap_tokens(candidate);
  const auto r = overlap_tokens(reference);
  if (c.empty() || r.empty()) throw Error(ErrorCode::InvalidInput, "ROUGE inputs must be nonempty");
  double overlap = 0.0;
  if (variant == RougeVariant::R1) {
    const auto cc = ngram_counts(c, 1);
    const auto rc = ngram_counts(r, 1);
    for (const auto& [gram, count] : cc) {
      const auto it = rc.find(gram);
      if (it != rc.end()) overlap += static_cast<double>(std::min(count, it->second));
    }
  }
  else {
    overlap = static_cast<double>(lcs_length(c, r));
  }
  return f1(overlap, static_cast<double>(c.size()), static_cast<double>(r.size()));
}

}  // namespace reframe::stats
