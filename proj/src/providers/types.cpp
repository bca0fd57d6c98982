#include "reframe/providers/types.hpp"

#include <algorithm>
#include <cmath>

#include "reframe/core/error.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::providers {

void CompletionRequest::validate() const
{
  if (max_tokens < 1) throw Error(ErrorCode::InvalidInput, "max_tokens must be >= 1");
  if (n < 1) throw Error(ErrorCode::InvalidInput, "n must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw Error(ErrorCode::InvalidInput, "top_p must be in (0, 1]");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::InvalidInput, "temperature must be >= 0");
  if (logprobs < 0) throw Error(ErrorCode::InvalidInput, "logprobs must be >= 0");
}

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values))
{
  if (values_.empty()) throw Error(ErrorCode::InvalidInput, "embedding must have dimension >= 1");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::InvalidInput, "embedding has non-finite components");
  }
}

double EmbeddingVector::norm() const noexcept { return std::sqrt(dot(values_, values_)); }

EmbeddingVector EmbeddingVector::normalized() const
{
  const double n = norm();
  if (n == 0.0) return *this;
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] / n;
  return EmbeddingVector(std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b)
{
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot(a.values(), b.values()) / (na * nb), -1.0, 1.0);
}

EmbeddingVector EmbeddingProvider::embed_one(std::string_view text) const
{
  const std::string owned(text);
  auto out = embed(std::span<const std::string>(&owned, 1));
  if (out.size() != 1) {
    throw ProviderError(ErrorCode::MalformedResponse, "expected one embedding, got " + std::to_string(out.size()));
  }
  return std::move(out.front());
}

}  // namespace reframe::providers
