#pragma once

#include <cstdint>
#include <memory>

#include "reframe/dataset/snapshot.hpp"
#include "reframe/providers/mock.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::service {

/// Offline completion model. It recognises each shipped prompt template by
/// its closing cue and answers with canned text chosen by a hash of the
/// prompt, so every response is a pure function of (prompt, choice index).
class DemoCompletionProvider final : public providers::CompletionProvider {
public:
  explicit DemoCompletionProvider(std::uint64_t seed = 0) : seed_(seed) {}

  providers::CompletionResult complete(const providers::CompletionRequest& req) const override;

private:
  providers::CompletionChoice answer(const providers::CompletionRequest& req, int index) const;

  std::uint64_t seed_;
};

/// Word-list sentiment in [0, 1].
double demo_sentiment(std::string_view text);
/// Count of validating phrases mapped onto [0, 6].
double demo_empathy(std::string_view text);

/// Everything needed to run the pipeline without network access.
struct DemoProviders {
  explicit DemoProviders(std::uint64_t seed = 0);

  DemoCompletionProvider completion;
  providers::HashEmbeddingProvider embedding;
  providers::FunctionScoreProvider sentiment;
  providers::FunctionScoreProvider empathy;
};

/// Synthetic dataset embedded with the demo embedder.
dataset::DatasetSnapshot demo_dataset(const providers::EmbeddingProvider& embedder, std::size_t n = 120,
                                      std::uint64_t seed = 7);

}  // namespace reframe::service
