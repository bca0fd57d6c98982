#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reframe/core/types.hpp"
#include "reframe/dataset/retrieval.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

/// A demonstration for the trap classifier: a text and the traps it addresses.
struct LabeledExample {
  std::string situation;
  std::string thought;
  std::string text;
  TrapSet traps;
};

/// Both annotated reframes of each retrieved entry, in rank order.
std::vector<LabeledExample> labeled_examples(const dataset::DatasetSnapshot& snapshot,
                                             std::span<const dataset::ScoredExample> retrieved);

std::string render_trap_prompt(const ThoughtRecord& record, std::string_view text,
                               std::span<const LabeledExample> examples);

/// First nonempty line split on commas; names that do not parse are dropped.
/// "None" (or nothing) yields the empty set.
TrapSet parse_trap_list(std::string_view completion);

/// Few-shot multi-label classification of the traps `text` addresses.
TrapSet classify_traps(const providers::CompletionProvider& provider, const ThoughtRecord& record,
                       std::string_view text, std::span<const LabeledExample> examples);

}  // namespace reframe::metrics
