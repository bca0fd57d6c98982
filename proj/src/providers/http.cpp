#include "reframe/providers/http.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>

namespace reframe::providers {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

SplitUrl split_url(const std::string& url)
{
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidInput, "endpoint url needs a scheme: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::optional<Endpoint> endpoint_from(const json& root, const char* key,
                                      std::chrono::milliseconds timeout)
{
  if (!root.contains(key)) return std::nullopt;
  const auto& section = root.at(key);
  if (!section.contains("url")) return std::nullopt;
  Endpoint ep{section.at("url").get<std::string>(), std::nullopt, timeout};
  if (section.contains("auth_env")) {
    const auto var = section.at("auth_env").get<std::string>();
    if (const char* token = std::getenv(var.c_str()); token != nullptr) ep.auth_token = token;
  }
  return ep;
}

[[noreturn]] void malformed(const std::string& what)
{
  throw ProviderError(ErrorCode::MalformedResponse, what);
}

json parse_body(std::string_view body)
{
  auto j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) malformed("response body is not valid JSON");
  return j;
}

}  // namespace

ProviderConfig ProviderConfig::from_json(const json& j)
{
  const auto timeout = std::chrono::milliseconds(j.value("request_timeout_ms", 30000));
  ProviderConfig cfg;
  cfg.completion = endpoint_from(j, "completion", timeout);
  cfg.embedding = endpoint_from(j, "embedding", timeout);
  cfg.sentiment = endpoint_from(j, "sentiment", timeout);
  cfg.empathy = endpoint_from(j, "empathy", timeout);
  return cfg;
}

json encode_completion_request(const CompletionRequest& req)
{
  return json{{"prompt", req.prompt},     {"max_tokens", req.max_tokens},
              {"top_p", req.top_p},       {"temperature", req.temperature},
              {"n", req.n},               {"logprobs", req.logprobs},
              {"stop", req.stop}};
}

CompletionResult decode_completion_response(std::string_view body, int expected_n)
{
  const auto j = parse_body(body);
  if (!j.is_object() || !j.contains("choices") || !j.at("choices").is_array()) {
    malformed("response lacks a choices array");
  }
  CompletionResult result;
  for (const auto& c : j.at("choices")) {
    if (!c.is_object() || !c.contains("text") || !c.at("text").is_string()) malformed("choice lacks text");
    CompletionChoice choice{c.at("text").get<std::string>(), {}};
    if (c.contains("token_logprobs")) {
      for (const auto& t : c.at("token_logprobs")) {
        if (!t.is_object() || !t.contains("token") || !t.contains("logprob") ||
            !t.at("token").is_string() || !t.at("logprob").is_number()) {
          malformed("token_logprobs entry needs {token, logprob}");
        }
        const double lp = t.at("logprob").get<double>();
        if (!(lp <= 0.0)) malformed("logprob must be <= 0");
        choice.token_logprobs.push_back({t.at("token").get<std::string>(), lp});
      }
    }
    result.choices.push_back(std::move(choice));
  }
  if (static_cast<int>(result.choices.size()) != expected_n) {
    malformed("expected " + std::to_string(expected_n) + " choices, got " +
              std::to_string(result.choices.size()));
  }
  return result;
}

std::vector<EmbeddingVector> decode_embedding_response(std::string_view body, std::size_t expected_count)
{
  const auto j = parse_body(body);
  if (!j.is_object() || !j.contains("embeddings") || !j.at("embeddings").is_array()) {
    malformed("response lacks an embeddings array");
  }
  std::vector<EmbeddingVector> out;
  for (const auto& row : j.at("embeddings")) {
    if (!row.is_array()) malformed("embedding is not an array");
    std::vector<double> values;
    for (const auto& v : row) {
      if (!v.is_number()) malformed("embedding component is not a number");
      values.push_back(v.get<double>());
    }
    try {
      out.emplace_back(std::move(values));
    }
    catch (const Error& e) {
      malformed(e.what());
    }
    if (out.back().dim() != out.front().dim()) malformed("embedding dimensions differ");
  }
  if (out.size() != expected_count) {
    malformed("expected " + std::to_string(expected_count) + " embeddings, got " + std::to_string(out.size()));
  }
  return out;
}

double decode_score_response(std::string_view body)
{
  const auto j = parse_body(body);
  if (!j.is_object() || !j.contains("score") || !j.at("score").is_number()) malformed("response lacks a numeric score");
  const double s = j.at("score").get<double>();
  if (!std::isfinite(s)) malformed("score is not finite");
  return s;
}

std::string post_json(const Endpoint& endpoint, const std::string& body)
{
  const auto [origin, path] = split_url(endpoint.url);
  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (endpoint.auth_token) headers.emplace("Authorization", "Bearer " + *endpoint.auth_token);

  const auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw ProviderError(ErrorCode::Timeout, "request to " + endpoint.url + " timed out");
    }
    throw ProviderError(ErrorCode::EndpointUnreachable,
                        "request to " + endpoint.url + " failed: " + httplib::to_string(err));
  }
  if (res->status == 429) throw ProviderError(ErrorCode::RateLimited, "rate limited by " + endpoint.url);
  if (res->status == 408 || res->status == 504) {
    throw ProviderError(ErrorCode::Timeout, "upstream timeout from " + endpoint.url);
  }
  if (res->status >= 500) {
    throw ProviderError(ErrorCode::EndpointUnreachable,
                        endpoint.url + " returned HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError(ErrorCode::MalformedResponse,
                        endpoint.url + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

HttpCompletionProvider::HttpCompletionProvider(Endpoint endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry))
{
}

CompletionResult HttpCompletionProvider::complete(const CompletionRequest& req) const
{
  req.validate();
  const auto body = encode_completion_request(req).dump();
  return with_retries(retry_, [&] { return decode_completion_response(post_json(endpoint_, body), req.n); });
}

HttpEmbeddingProvider::HttpEmbeddingProvider(Endpoint endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry))
{
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) const
{
  if (texts.empty()) throw Error(ErrorCode::InvalidInput, "embed needs at least one text");
  const auto body = json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();
  return with_retries(retry_, [&] { return decode_embedding_response(post_json(endpoint_, body), texts.size()); });
}

HttpScoreProvider::HttpScoreProvider(Endpoint endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry))
{
}

double HttpScoreProvider::score(std::string_view text) const
{
  const auto body = json{{"text", std::string(text)}}.dump();
  return with_retries(retry_, [&] { return decode_score_response(post_json(endpoint_, body)); });
}

}  // namespace reframe::providers
