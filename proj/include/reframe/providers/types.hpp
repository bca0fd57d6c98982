#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace reframe::providers {

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 256;
  double top_p = 1.0;
  double temperature = 0.0;
  int n = 1;
  int logprobs = 0;
  std::vector<std::string> stop;

  /// Throws Error(InvalidInput) when a field is out of range.
  void validate() const;
};

struct TokenLogprob {
  std::string token;
  double logprob = 0.0;

  friend bool operator==(const TokenLogprob&, const TokenLogprob&) = default;
};

struct CompletionChoice {
  std::string text;
  std::vector<TokenLogprob> token_logprobs;

  friend bool operator==(const CompletionChoice&, const CompletionChoice&) = default;
};

struct CompletionResult {
  std::vector<CompletionChoice> choices;
};

/// Fixed-dimension vector with finite components.
class EmbeddingVector {
public:
  /// Throws Error(InvalidInput) on empty input or non-finite components.
  explicit EmbeddingVector(std::vector<double> values);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double norm() const noexcept;
  /// Unit-length copy; the zero vector stays zero.
  [[nodiscard]] EmbeddingVector normalized() const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
/// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace reframe::providers
