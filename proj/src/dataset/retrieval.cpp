#include "reframe/dataset/retrieval.hpp"

#include <algorithm>
#include <cmath>

namespace reframe::dataset {

QueryEmbedding embed_query(const providers::EmbeddingProvider& embedder, const ThoughtRecord& query)
{
  const std::vector<std::string> texts{query.situation(), query.thought()};
  auto emb = embedder.embed(texts);
  if (emb.size() != 2) {
    throw providers::ProviderError(ErrorCode::MalformedResponse, "expected 2 query embeddings");
  }
  return {emb[0].normalized(), emb[1].normalized()};
}

std::vector<ScoredExample> retrieve_similar(const DatasetSnapshot& snapshot, const QueryEmbedding& query,
                                            std::size_t k, const std::function<bool(std::size_t)>& accept)
{
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be >= 1");
  struct Scored {
    double score;
    double key;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(snapshot.size());
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    if (accept && !accept(i)) continue;
    const double s = providers::dot(snapshot.situation_embedding(i).values(), query.situation.values());
    const double t = providers::dot(snapshot.thought_embedding(i).values(), query.thought.values());
    const double score = std::clamp(s, -1.0, 1.0) * std::clamp(t, -1.0, 1.0);
    scored.push_back({score, std::round(score / kScoreTieResolution), i});
  }
  if (scored.empty()) throw Error(ErrorCode::EmptyDataset, "no dataset entries to retrieve from");

  const auto take = std::min(k, scored.size());
  const auto better = [](const Scored& a, const Scored& b) {
    return a.key > b.key || (a.key == b.key && a.index < b.index);
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);

  std::vector<ScoredExample> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    const auto& s = scored[r];
    out.push_back({snapshot.entry(s.index).id, s.index, s.score, static_cast<int>(r + 1)});
  }
  return out;
}

std::vector<ScoredExample> retrieve_similar(const DatasetSnapshot& snapshot,
                                            const providers::EmbeddingProvider& embedder,
                                            const ThoughtRecord& query, std::size_t k)
{
  if (snapshot.empty()) throw Error(ErrorCode::EmptyDataset, "cannot retrieve from an empty dataset");
  return retrieve_similar(snapshot, embed_query(embedder, query), k);
}

}  // namespace reframe::dataset
