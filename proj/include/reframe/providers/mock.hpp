#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "reframe/providers/provider.hpp"

namespace reframe::providers {

/// Stable fingerprint of a prompt (16 hex digits).
std::string prompt_fingerprint(std::string_view prompt);

/// Completion provider backed by a pure function of (request, choice index).
class MockCompletionProvider final : public CompletionProvider {
public:
  using Responder = std::function<CompletionChoice(const CompletionRequest&, int choice_index)>;

  explicit MockCompletionProvider(Responder responder) : responder_(std::move(responder)) {}

  CompletionResult complete(const CompletionRequest& req) const override;

private:
  Responder responder_;
};

/// Maps prompt fingerprints to canned choices. Choice i of a request is
/// script[i % script.size()]. Unscripted prompts get the fallback, or throw
/// MalformedResponse when there is none.
class ScriptedCompletionProvider final : public CompletionProvider {
public:
  class Builder {
  public:
    Builder& on_prompt(std::string_view prompt, std::vector<CompletionChoice> choices);
    Builder& on_fingerprint(std::string fingerprint, std::vector<CompletionChoice> choices);
    Builder& fallback(CompletionChoice choice);
    ScriptedCompletionProvider build() const;

  private:
    std::map<std::string, std::vector<CompletionChoice>> table_;
    std::optional<CompletionChoice> fallback_;
  };

  CompletionResult complete(const CompletionRequest& req) const override;

private:
  ScriptedCompletionProvider(std::map<std::string, std::vector<CompletionChoice>> table,
                             std::optional<CompletionChoice> fallback)
      : table_(std::move(table)), fallback_(std::move(fallback))
  {
  }

  std::map<std::string, std::vector<CompletionChoice>> table_;
  std::optional<CompletionChoice> fallback_;
};

/// Decorator that records every request/response pair in call order.
class RecordingCompletionProvider final : public CompletionProvider {
public:
  explicit RecordingCompletionProvider(const CompletionProvider& inner) : inner_(inner) {}

  CompletionResult complete(const CompletionRequest& req) const override;

  [[nodiscard]] std::vector<CompletionRequest> requests() const;
  /// One JSON object per line: {fingerprint, request, choices}.
  [[nodiscard]] std::string transcript_jsonl() const;
  void clear();

private:
  const CompletionProvider& inner_;
  mutable std::mutex mutex_;
  mutable std::vector<std::pair<CompletionRequest, CompletionResult>> log_;
};

/// Caps the number of in-flight requests to the wrapped provider.
class ConcurrencyLimitedCompletionProvider final : public CompletionProvider {
public:
  static constexpr std::ptrdiff_t kMaxLimit = 1024;

  ConcurrencyLimitedCompletionProvider(const CompletionProvider& inner, std::ptrdiff_t limit);

  CompletionResult complete(const CompletionRequest& req) const override;

private:
  const CompletionProvider& inner_;
  mutable std::counting_semaphore<kMaxLimit> slots_;
};

/// Signed feature hashing of lowercase alphanumeric tokens, unit-normalized.
/// Deterministic across runs and platforms.
class HashEmbeddingProvider final : public EmbeddingProvider {
public:
  explicit HashEmbeddingProvider(std::size_t dim = 256, std::uint64_t seed = 0);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

  [[nodiscard]] EmbeddingVector embed_text(std::string_view text) const;

private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Fixed text -> vector table; unknown texts go to the fallback provider or
/// raise MalformedResponse.
class TableEmbeddingProvider final : public EmbeddingProvider {
public:
  TableEmbeddingProvider(std::map<std::string, std::vector<double>> table,
                         const EmbeddingProvider* fallback = nullptr);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

private:
  std::map<std::string, std::vector<double>> table_;
  const EmbeddingProvider* fallback_;
};

class FunctionScoreProvider final : public ScoreProvider {
public:
  explicit FunctionScoreProvider(std::function<double(std::string_view)> fn) : fn_(std::move(fn)) {}

  double score(std::string_view text) const override { return fn_(text); }

private:
  std::function<double(std::string_view)> fn_;
};

/// Scripted text -> score table with a default for unlisted texts.
class ScriptedScoreProvider final : public ScoreProvider {
public:
  ScriptedScoreProvider(std::map<std::string, double, std::less<>> table, double fallback)
      : table_(std::move(table)), fallback_(fallback)
  {
  }

  double score(std::string_view text) const override;

private:
  std::map<std::string, double, std::less<>> table_;
  double fallback_;
};

}  // namespace reframe::providers
