#include "reframe/metrics/specificity.hpp"

#include "reframe/core/text.hpp"

namespace reframe::metrics {

double specificity(const providers::EmbeddingProvider& embedder, const ThoughtRecord& record,
                   std::string_view reframe)
{
  if (text::trim(reframe).empty()) throw Error(ErrorCode::InvalidInput, "specificity needs a nonempty reframe");
  const std::vector<std::string> texts{std::string(reframe), record.situation() + " " + record.thought()};
  const auto emb = embedder.embed(texts);
  if (emb.size() != 2) throw providers::ProviderError(ErrorCode::MalformedResponse, "expected 2 embeddings");
  return providers::cosine(emb[0], emb[1]);
}

}  // namespace reframe::metrics
