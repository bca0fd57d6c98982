#pragma once

#include <chrono>
#include <optional>
#include <string>

#include <json.hpp>

#include "reframe/providers/provider.hpp"
#include "reframe/providers/retry.hpp"

namespace reframe::providers {

struct Endpoint {
  std::string url;                       // http://host:port/path
  std::optional<std::string> auth_token; // sent as a Bearer token
  std::chrono::milliseconds timeout{30000};
};

/// Reads `completion.url`, `completion.auth_env`, `embedding.url`,
/// `request_timeout_ms` etc. The token is taken from the environment
/// variable named by `auth_env`.
struct ProviderConfig {
  std::optional<Endpoint> completion;
  std::optional<Endpoint> embedding;
  std::optional<Endpoint> sentiment;
  std::optional<Endpoint> empathy;

  static ProviderConfig from_json(const nlohmann::json& j);
};

// Wire formats. Completion: {prompt, max_tokens, top_p, temperature, n,
// logprobs, stop} -> {choices: [{text, token_logprobs: [{token, logprob}]}]}.
// Embedding: {texts: [...]} -> {embeddings: [[...], ...]}.
// Scorer: {text} -> {score}.
nlohmann::json encode_completion_request(const CompletionRequest& req);
/// Throws ProviderError(MalformedResponse) on schema violations, including a
/// choice count different from `expected_n` or a positive logprob.
CompletionResult decode_completion_response(std::string_view body, int expected_n);
std::vector<EmbeddingVector> decode_embedding_response(std::string_view body, std::size_t expected_count);
double decode_score_response(std::string_view body);

class HttpCompletionProvider final : public CompletionProvider {
public:
  explicit HttpCompletionProvider(Endpoint endpoint, RetryPolicy retry = {});

  CompletionResult complete(const CompletionRequest& req) const override;

private:
  Endpoint endpoint_;
  RetryPolicy retry_;
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
  explicit HttpEmbeddingProvider(Endpoint endpoint, RetryPolicy retry = {});

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

private:
  Endpoint endpoint_;
  RetryPolicy retry_;
};

class HttpScoreProvider final : public ScoreProvider {
public:
  explicit HttpScoreProvider(Endpoint endpoint, RetryPolicy retry = {});

  double score(std::string_view text) const override;

private:
  Endpoint endpoint_;
  RetryPolicy retry_;
};

/// One POST of `body` to the endpoint; maps transport failures and HTTP
/// status codes onto ProviderError. No retries.
std::string post_json(const Endpoint& endpoint, const std::string& body);

}  // namespace reframe::providers
