#include "reframe/providers/probability.hpp"

#include <cmath>

#include "reframe/core/text.hpp"

namespace reframe::providers {
namespace {

bool token_matches(std::string_view token, std::string_view option)
{
  return text::iequals(text::trim(token), text::trim(option));
}

}  // namespace

TokenPair pair_from_logprobs(const CompletionChoice& choice, std::string_view option_a,
                             std::string_view option_b)
{
  double pa = 0.0;
  double pb = 0.0;
  for (const auto& t : choice.token_logprobs) {
    const double p = std::exp(t.logprob);
    if (token_matches(t.token, option_a)) pa = std::max(pa, p);
    else if (token_matches(t.token, option_b)) pb = std::max(pb, p);
  }
  if (pa <= 0.0) pa = kAbsentTokenProbability;
  if (pb <= 0.0) pb = kAbsentTokenProbability;
  const double total = pa + pb;
  return {pa / total, pb / total};
}

TokenPair token_pair_probability(const CompletionProvider& provider, std::string_view context,
                                 std::string_view option_a, std::string_view option_b)
{
  CompletionRequest req;
  req.prompt = std::string(context);
  req.max_tokens = 1;
  req.temperature = 0.0;
  req.top_p = 1.0;
  req.n = 1;
  req.logprobs = kTopLogprobs;
  const auto result = provider.complete(req);
  return pair_from_logprobs(result.choices.front(), option_a, option_b);
}

}  // namespace reframe::providers
