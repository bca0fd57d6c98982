#include "reframe/metrics/actionability.hpp"

#include <algorithm>
#include <regex>

#include "reframe/core/prompt_template.hpp"
#include "reframe/core/text.hpp"

namespace reframe::metrics {

std::string render_contains_action_prompt(std::string_view reframe)
{
  static const auto tpl = PromptTemplate::from_asset("templates/contains_action.v1.txt");
  return tpl.render(TemplateScope{}.set("reframe", std::string(text::trim(reframe))));
}

std::string render_next_actions_prompt(std::string_view reframe, int k)
{
  static const auto tpl = PromptTemplate::from_asset("templates/next_actions.v1.txt");
  return tpl.render(TemplateScope{}.set("reframe", std::string(text::trim(reframe))).set("k", std::to_string(k)));
}

std::optional<std::string> parse_proposed_action(std::string_view completion)
{
  std::string first;
  for (const auto& l : text::split_lines(completion)) {
    if (!text::trim(l).empty()) {
      first = std::string(text::trim(l));
      break;
    }
  }
  std::string action = text::strip_quotes(first);
  std::string key = text::to_lower(action);
  while (!key.empty() && (key.back() == '.' || key.back() == '!')) key.pop_back();
  key = std::string(text::trim(key));
  if (key.empty() || key == "none" || key == "no action" || key == "no action needed") return std::nullopt;
  return action;
}

std::vector<std::string> parse_action_lines(std::string_view completion, int k)
{
  static const std::regex marker(R"(^\s*(?:\d+\s*[.)]|-|\*|•)\s*)");
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(completion)) {
    auto stripped = std::regex_replace(line, marker, "", std::regex_constants::format_first_only);
    auto trimmed = std::string(text::trim(stripped));
    if (trimmed.empty()) continue;
    out.push_back(std::move(trimmed));
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

ContainsActionResult contains_action(const providers::CompletionProvider& provider, std::string_view reframe)
{
  if (text::trim(reframe).empty()) throw Error(ErrorCode::InvalidInput, "contains_action needs nonempty text");
  providers::CompletionRequest req;
  req.prompt = render_contains_action_prompt(reframe);
  req.max_tokens = 32;
  req.temperature = 0.0;
  req.stop = {"\n"};
  const auto result = provider.complete(req);
  auto action = parse_proposed_action(result.choices.front().text);
  return {action.has_value(), std::move(action)};
}

double mean_pairwise_cosine(std::span<const providers::EmbeddingVector> vectors)
{
  if (vectors.size() < 2) throw Error(ErrorCode::FewerThanTwoActions, "need at least two vectors");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      sum += providers::cosine(vectors[i], vectors[j]);
      ++pairs;
    }
  }
  return std::clamp(sum / static_cast<double>(pairs), -1.0, 1.0);
}

CoherenceResult next_action_coherence(const providers::CompletionProvider& provider,
                                      const providers::EmbeddingProvider& embedder, std::string_view reframe,
                                      int k)
{
  if (k < 2) throw Error(ErrorCode::InvalidInput, "next_action_coherence needs k >= 2");
  if (text::trim(reframe).empty()) throw Error(ErrorCode::InvalidInput, "next_action_coherence needs nonempty text");
  providers::CompletionRequest req;
  req.prompt = render_next_actions_prompt(reframe, k);
  req.max_tokens = 40 * k;
  req.temperature = 0.0;
  const auto result = provider.complete(req);
  auto actions = parse_action_lines(result.choices.front().text, k);
  if (actions.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoActions,
                "expected " + std::to_string(k) + " actions, parsed " + std::to_string(actions.size()));
  }
  const auto emb = embedder.embed(actions);
  return {mean_pairwise_cosine(emb), std::move(actions)};
}

double combine_actionability(bool contains, double coherence)
{
  return std::clamp((contains ? 1.0 : 0.0) + (std::clamp(coherence, -1.0, 1.0) + 1.0) / 2.0, 0.0, 2.0);
}

ActionabilityResult actionability(const providers::CompletionProvider& provider,
                                  const providers::EmbeddingProvider& embedder, std::string_view reframe, int k)
{
  const auto has_action = contains_action(provider, reframe);
  auto coherence = next_action_coherence(provider, embedder, reframe, k);
  return {combine_actionability(has_action.contains, coherence.coherence), has_action.contains,
          has_action.action, coherence.coherence, std::move(coherence.actions)};
}

}  // namespace reframe::metrics
