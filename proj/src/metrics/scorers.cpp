#include "reframe/metrics/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reframe/core/log.hpp"
#include "reframe/core/text.hpp"

namespace reframe::metrics {
namespace {

double scored_in_range(const providers::ScoreProvider& scorer, std::string_view text, double lo, double hi,
                       std::string_view what)
{
  if (text::trim(text).empty()) throw Error(ErrorCode::InvalidInput, std::string(what) + " needs nonempty text");
  const double raw = scorer.score(text);
  if (!std::isfinite(raw)) {
    throw providers::ProviderError(ErrorCode::MalformedResponse, std::string(what) + " scorer returned a non-finite value");
  }
  if (raw < lo || raw > hi) {
    const double clamped = std::clamp(raw, lo, hi);
    log::warn(std::string(what) + " score " + std::to_string(raw) + " clamped to " + std::to_string(clamped));
    return clamped;
  }
  return raw;
}

}  // namespace

double positivity(const providers::ScoreProvider& scorer, std::string_view reframe)
{
  return scored_in_range(scorer, reframe, 0.0, 1.0, "positivity");
}

double empathy(const providers::ScoreProvider& scorer, std::string_view reframe)
{
  return scored_in_range(scorer, reframe, 0.0, 6.0, "empathy");
}

}  // namespace reframe::metrics
