#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "reframe/core/attributes.hpp"
#include "reframe/core/types.hpp"
#include "reframe/dataset/snapshot.hpp"
#include "reframe/metrics/actionability.hpp"
#include "reframe/metrics/rationality.hpp"
#include "reframe/metrics/readability.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

struct ScoringOptions {
  RationalityConfig rationality;
  int next_actions = kDefaultNextActions;
  std::size_t trap_examples_k = 5;
  bool concurrent = true;
};

/// A (possibly partial) attribute vector plus per-metric diagnostics.
struct ScoreReport {
  AttributeVector vector;
  std::map<AttributeKind, std::string> failures;
  std::optional<ReasoningNode> reasoning_tree;
  std::optional<ActionabilityResult> actionability;
  std::optional<ReadabilityStats> readability;
};

/// Bundles the providers needed for all seven measurements. Providers must
/// outlive the scorer.
class AttributeScorer {
public:
  AttributeScorer(const providers::CompletionProvider& completion, const providers::EmbeddingProvider& embedding,
                  const providers::ScoreProvider& sentiment, const providers::ScoreProvider& empathy,
                  ScoringOptions options = {});

  /// Labeled examples for trap classification are retrieved from this snapshot.
  void set_trap_examples(dataset::DatasetSnapshot snapshot) { trap_examples_ = std::move(snapshot); }

  TrapSet classify(const ThoughtRecord& record, std::string_view text) const;

  /// Runs every metric; a failing metric leaves its field absent and records
  /// the error in `failures`. Throws Error(AllMetricsFailed) if none succeed.
  ScoreReport score_all(const ThoughtRecord& record, std::string_view reframe) const;

private:
  const providers::CompletionProvider& completion_;
  const providers::EmbeddingProvider& embedding_;
  const providers::ScoreProvider& sentiment_;
  const providers::ScoreProvider& empathy_;
  ScoringOptions options_;
  std::optional<dataset::DatasetSnapshot> trap_examples_;
};

}  // namespace reframe::metrics
