#pragma once

#include <string_view>

#include "reframe/core/types.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

/// cosine(emb(reframe), emb(situation + " " + thought)).
double specificity(const providers::EmbeddingProvider& embedder, const ThoughtRecord& record,
                   std::string_view reframe);

}  // namespace reframe::metrics
