#include "reframe/metrics/score_all.hpp"

#include <functional>
#include <future>
#include <vector>

#include "reframe/core/text.hpp"
#include "reframe/dataset/retrieval.hpp"
#include "reframe/metrics/scorers.hpp"
#include "reframe/metrics/specificity.hpp"
#include "reframe/metrics/traps.hpp"

namespace reframe::metrics {

AttributeScorer::AttributeScorer(const providers::CompletionProvider& completion,
                                 const providers::EmbeddingProvider& embedding,
                                 const providers::ScoreProvider& sentiment, const providers::ScoreProvider& empathy,
                                 ScoringOptions options)
    : completion_(completion), embedding_(embedding), sentiment_(sentiment), empathy_(empathy),
      options_(std::move(options))
{
  options_.rationality.validate();
}

TrapSet AttributeScorer::classify(const ThoughtRecord& record, std::string_view text) const
{
  std::vector<LabeledExample> examples;
  if (trap_examples_ && !trap_examples_->empty()) {
    const auto retrieved = dataset::retrieve_similar(*trap_examples_, embedding_, record, options_.trap_examples_k);
    examples = labeled_examples(*trap_examples_, retrieved);
  }
  return classify_traps(completion_, record, text, examples);
}

ScoreReport AttributeScorer::score_all(const ThoughtRecord& record, std::string_view reframe) const
{
  if (text::trim(reframe).empty()) throw Error(ErrorCode::InvalidInput, "reframe must not be empty");
  const std::string text(reframe);

  ScoreReport report;
  std::optional<TrapSet> traps;
  std::optional<RationalityResult> rationality_result;
  std::optional<double> positivity_value;
  std::optional<double> empathy_value;
  std::optional<ActionabilityResult> actionability_result;
  std::optional<double> specificity_value;

  struct Task {
    AttributeKind attribute;
    std::function<void()> run;
  };
  std::vector<Task> tasks{
      {AttributeKind::AddressesTraps, [&] { traps = classify(record, text); }},
      {AttributeKind::Rationality,
       [&] { rationality_result = metrics::rationality(completion_, record, text, options_.rationality); }},
      {AttributeKind::Positivity, [&] { positivity_value = positivity(sentiment_, text); }},
      {AttributeKind::Empathy, [&] { empathy_value = metrics::empathy(empathy_, text); }},
      {AttributeKind::Actionability,
       [&] { actionability_result = actionability(completion_, embedding_, text, options_.next_actions); }},
      {AttributeKind::Specificity, [&] { specificity_value = specificity(embedding_, record, text); }},
  };

  auto guarded = [](const Task& task) -> std::optional<std::string> {
    try {
      task.run();
      return std::nullopt;
    }
    catch (const std::exception& e) {
      return std::string(e.what());
    }
  };

  std::vector<std::optional<std::string>> errors(tasks.size());
  if (options_.concurrent) {
    std::vector<std::future<std::optional<std::string>>> futures;
    for (const auto& task : tasks) futures.push_back(std::async(std::launch::async, guarded, std::cref(task)));
    for (std::size_t i = 0; i < tasks.size(); ++i) errors[i] = futures[i].get();
  }
  else {
    for (std::size_t i = 0; i < tasks.size(); ++i) errors[i] = guarded(tasks[i]);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errors[i]) report.failures[tasks[i].attribute] = *errors[i];
  }

  try {
    const auto r = readability(text);
    report.vector.set_readability(r.cli);
    report.readability = r.stats;
  }
  catch (const std::exception& e) {
    report.failures[AttributeKind::Readability] = e.what();
  }

  if (traps) report.vector.set_traps_addressed(*traps);
  if (rationality_result) {
    report.vector.set_rationality(rationality_result->score);
    report.reasoning_tree = std::move(rationality_result->tree);
  }
  if (positivity_value) report.vector.set_positivity(*positivity_value);
  if (empathy_value) report.vector.set_empathy(*empathy_value);
  if (actionability_result) {
    report.vector.set_actionability(actionability_result->score);
    report.actionability = std::move(actionability_result);
  }
  if (specificity_value) report.vector.set_specificity(*specificity_value);

  if (report.failures.size() == kAllAttributes.size()) {
    throw Error(ErrorCode::AllMetricsFailed, "every attribute metric failed; first: " + report.failures.begin()->second);
  }
  return report;
}

}  // namespace reframe::metrics
