#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/providers/types.hpp"

namespace reframe::providers {

/// A provider failure (Timeout, RateLimited, MalformedResponse or
/// EndpointUnreachable) together with the number of attempts made.
class ProviderError : public Error {
public:
  ProviderError(ErrorCode code, const std::string& message, int attempts = 1)
      : Error(code, message + " (after " + std::to_string(attempts) + " attempt" +
                        (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts), detail_(message)
  {
  }

  [[nodiscard]] int attempts() const noexcept { return attempts_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
  int attempts_;
  std::string detail_;
};

class CompletionProvider {
public:
  virtual ~CompletionProvider() = default;

  /// Returns exactly req.n choices or throws ProviderError.
  virtual CompletionResult complete(const CompletionRequest& req) const = 0;
};

class EmbeddingProvider {
public:
  virtual ~EmbeddingProvider() = default;

  /// One vector per input text, in order, all of one dimension.
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;

  EmbeddingVector embed_one(std::string_view text) const;
};

/// Scalar text scorer (sentiment, empathy level, ...). Values are returned
/// as produced; range handling belongs to the caller.
class ScoreProvider {
public:
  virtual ~ScoreProvider() = default;

  virtual double score(std::string_view text) const = 0;
};

}  // namespace reframe::providers
