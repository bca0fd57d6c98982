#include "reframe/providers/mock.hpp"

#include <cctype>

#include "reframe/core/random.hpp"
#include "reframe/providers/http.hpp"

namespace reframe::providers {

std::string prompt_fingerprint(std::string_view prompt) { return hex64(fnv1a64(prompt)); }

CompletionResult MockCompletionProvider::complete(const CompletionRequest& req) const
{
  req.validate();
  CompletionResult result;
  result.choices.reserve(static_cast<std::size_t>(req.n));
  for (int i = 0; i < req.n; ++i) result.choices.push_back(responder_(req, i));
  return result;
}

ScriptedCompletionProvider::Builder&
ScriptedCompletionProvider::Builder::on_prompt(std::string_view prompt, std::vector<CompletionChoice> choices)
{
  return on_fingerprint(prompt_fingerprint(prompt), std::move(choices));
}

ScriptedCompletionProvider::Builder&
ScriptedCompletionProvider::Builder::on_fingerprint(std::string fingerprint, std::vector<CompletionChoice> choices)
{
  if (choices.empty()) throw Error(ErrorCode::InvalidInput, "scripted prompt needs at least one choice");
  table_[std::move(fingerprint)] = std::move(choices);
  return *this;
}

ScriptedCompletionProvider::Builder& ScriptedCompletionProvider::Builder::fallback(CompletionChoice choice)
{
  fallback_ = std::move(choice);
  return *this;
}

ScriptedCompletionProvider ScriptedCompletionProvider::Builder::build() const
{
  return ScriptedCompletionProvider(table_, fallback_);
}

CompletionResult ScriptedCompletionProvider::complete(const CompletionRequest& req) const
{
  req.validate();
  const auto it = table_.find(prompt_fingerprint(req.prompt));
  if (it == table_.end() && !fallback_) {
    throw ProviderError(ErrorCode::MalformedResponse,
                        "no scripted reply for prompt " + prompt_fingerprint(req.prompt));
  }
  CompletionResult result;
  for (int i = 0; i < req.n; ++i) {
    if (it == table_.end()) {
      result.choices.push_back(*fallback_);
    }
    else {
      const auto& script = it->second;
      result.choices.push_back(script[static_cast<std::size_t>(i) % script.size()]);
    }
  }
  return result;
}

CompletionResult RecordingCompletionProvider::complete(const CompletionRequest& req) const
{
  auto result = inner_.complete(req);
  std::lock_guard lock(mutex_);
  log_.emplace_back(req, result);
  return result;
}

std::vector<CompletionRequest> RecordingCompletionProvider::requests() const
{
  std::lock_guard lock(mutex_);
  std::vector<CompletionRequest> out;
  for (const auto& [req, res] : log_) out.push_back(req);
  return out;
}

std::string RecordingCompletionProvider::transcript_jsonl() const
{
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& [req, res] : log_) {
    nlohmann::json choices = nlohmann::json::array();
    for (const auto& c : res.choices) {
      nlohmann::json lps = nlohmann::json::array();
      for (const auto& t : c.token_logprobs) lps.push_back({{"token", t.token}, {"logprob", t.logprob}});
      choices.push_back({{"text", c.text}, {"token_logprobs", lps}});
    }
    out += nlohmann::json{{"fingerprint", prompt_fingerprint(req.prompt)},
                          {"request", encode_completion_request(req)},
                          {"choices", choices}}
               .dump();
    out += '\n';
  }
  return out;
}

void RecordingCompletionProvider::clear()
{
  std::lock_guard lock(mutex_);
  log_.clear();
}

ConcurrencyLimitedCompletionProvider::ConcurrencyLimitedCompletionProvider(const CompletionProvider& inner,
                                                                           std::ptrdiff_t limit)
    : inner_(inner), slots_(limit)
{
  if (limit < 1 || limit > kMaxLimit) throw Error(ErrorCode::InvalidInput, "concurrency limit out of range");
}

CompletionResult ConcurrencyLimitedCompletionProvider::complete(const CompletionRequest& req) const
{
  slots_.acquire();
  struct Release {
    std::counting_semaphore<kMaxLimit>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_.complete(req);
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed)
{
  if (dim_ == 0) throw Error(ErrorCode::InvalidInput, "embedding dimension must be >= 1");
}

EmbeddingVector HashEmbeddingProvider::embed_text(std::string_view text) const
{
  std::vector<double> v(dim_, 0.0);
  std::string token;
  bool any = false;
  auto flush = [&] {
    if (token.empty()) return;
    const auto h = fnv1a64(token, 0xcbf29ce484222325ULL ^ seed_);
    v[h % dim_] += (h >> 63) != 0 ? -1.0 : 1.0;
    token.clear();
    any = true;
  };
  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) != 0 || u >= 0x80 || c == '\'') {
      token.push_back(static_cast<char>(std::tolower(u)));
    }
    else {
      flush();
    }
  }
  flush();
  if (!any) {
    const auto h = fnv1a64(text, seed_);
    v[h % dim_] = 1.0;
  }
  // All-cancelling tokens can leave a zero vector; nudge one bucket so the
  // vector stays normalizable.
  bool zero = true;
  for (const double x : v) zero = zero && x == 0.0;
  if (zero) v[fnv1a64(text, seed_ + 1) % dim_] = 1.0;
  return EmbeddingVector(std::move(v)).normalized();
}

std::vector<EmbeddingVector> HashEmbeddingProvider::embed(std::span<const std::string> texts) const
{
  if (texts.empty()) throw Error(ErrorCode::InvalidInput, "embed needs at least one text");
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_text(t));
  return out;
}

TableEmbeddingProvider::TableEmbeddingProvider(std::map<std::string, std::vector<double>> table,
                                               const EmbeddingProvider* fallback)
    : table_(std::move(table)), fallback_(fallback)
{
}

std::vector<EmbeddingVector> TableEmbeddingProvider::embed(std::span<const std::string> texts) const
{
  if (texts.empty()) throw Error(ErrorCode::InvalidInput, "embed needs at least one text");
  std::vector<EmbeddingVector> out;
  for (const auto& t : texts) {
    if (const auto it = table_.find(t); it != table_.end()) {
      out.emplace_back(it->second);
    }
    else if (fallback_ != nullptr) {
      out.push_back(fallback_->embed_one(t));
    }
    else {
      throw ProviderError(ErrorCode::MalformedResponse, "no embedding scripted for '" + t + "'");
    }
  }
  return out;
}

double ScriptedScoreProvider::score(std::string_view text) const
{
  const auto it = table_.find(text);
  return it == table_.end() ? fallback_ : it->second;
}

}  // namespace reframe::providers
