#pragma once

#include <string_view>

#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

/// P(positive sentiment) from the sentiment scorer, clamped into [0, 1].
double positivity(const providers::ScoreProvider& scorer, std::string_view reframe);

/// Empathy level from the empathy scorer, clamped into [0, 6].
double empathy(const providers::ScoreProvider& scorer, std::string_view reframe);

}  // namespace reframe::metrics
