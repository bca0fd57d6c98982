#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "reframe/core/types.hpp"
#include "reframe/dataset/snapshot.hpp"

namespace reframe::dataset {

inline constexpr std::size_t kDefaultRetrievalK = 5;

struct ScoredExample {
  std::string entry_id;
  std::size_t index = 0;  // position in the snapshot
  double score = 0.0;     // cosine(situation) * cosine(thought)
  int rank = 0;           // 1-based
};

struct QueryEmbedding {
  providers::EmbeddingVector situation;
  providers::EmbeddingVector thought;
};

/// Embeds and normalizes the query's situation and thought.
QueryEmbedding embed_query(const providers::EmbeddingProvider& embedder, const ThoughtRecord& query);

/// Scores that agree on this grid rank as ties. Equal similarities computed
/// along different paths can differ in the last bits.
inline constexpr double kScoreTieResolution = 1e-12;

/// Exact top-k by the product of situation and thought cosine similarities,
/// descending, ties broken by snapshot order. Entries rejected by `accept`
/// are skipped. Throws Error(EmptyDataset) when no entry is eligible.
std::vector<ScoredExample> retrieve_similar(const DatasetSnapshot& snapshot, const QueryEmbedding& query,
                                            std::size_t k,
                                            const std::function<bool(std::size_t)>& accept = {});

std::vector<ScoredExample> retrieve_similar(const DatasetSnapshot& snapshot,
                                            const providers::EmbeddingProvider& embedder,
                                            const ThoughtRecord& query, std::size_t k);

}  // namespace reframe::dataset
