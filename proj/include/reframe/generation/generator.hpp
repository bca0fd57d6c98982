#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/core/types.hpp"
#include "reframe/dataset/snapshot.hpp"
#include "reframe/generation/safety.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::generation {

enum class Direction { High, Low };

struct GeneratorConfig {
  std::size_t k = 5;
  double top_p = 0.6;
  double temperature = 1.0;
  int max_tokens = 120;
  /// Samples drawn per prompt before giving up on safety blocks.
  int max_safety_attempts = 3;
  /// Regeneration attempts when variants of a condition set collide.
  int max_duplicate_attempts = 3;
  std::uint64_t seed = 0;
};

/// A rendered prompt and the dataset entries it demonstrates, in rank order.
struct PromptAssembly {
  std::string template_id;
  std::string rendered;
  std::vector<std::string> example_ids;
};

/// Two reframes of one annotated entry ordered by the annotators' choice for
/// an attribute: the preferred one is high.
struct RewritePair {
  AttributeKind attribute;
  std::string entry_id;
  std::string low_text;
  std::string high_text;
};

class PoolTooSmallError : public Error {
public:
  PoolTooSmallError(std::string pool, std::size_t size, std::size_t needed)
      : Error(ErrorCode::PoolTooSmall, "pool '" + pool + "' has " + std::to_string(size) + " entries, needs " +
                                           std::to_string(needed)),
        pool_(std::move(pool)), size_(size)
  {
  }
  [[nodiscard]] const std::string& pool() const noexcept { return pool_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }

private:
  std::string pool_;
  std::size_t size_;
};

/// Trims a completion to its first nonempty paragraph and strips surrounding quotes.
std::string clean_completion(std::string_view completion);

/// Retrieval-enhanced in-context generation over one dataset snapshot.
/// Every text it returns has passed the safety filter.
class ReframeGenerator {
public:
  ReframeGenerator(dataset::DatasetSnapshot examples, const providers::CompletionProvider& completion,
                   const providers::EmbeddingProvider& embedding, SafetyFilter safety, GeneratorConfig config = {});

  [[nodiscard]] const dataset::DatasetSnapshot& examples() const noexcept { return examples_; }
  [[nodiscard]] const SafetyFilter& safety() const noexcept { return safety_; }
  [[nodiscard]] const GeneratorConfig& config() const noexcept { return config_; }

  [[nodiscard]] PromptAssembly generation_prompt(const ThoughtRecord& record, const TrapSet& selected_traps = {}) const;
  /// `addressing` selects the pool of reframes annotated with at least one
  /// trap (true) or with none (false). Throws PoolTooSmallError.
  [[nodiscard]] PromptAssembly trap_prompt(const ThoughtRecord& record, bool addressing,
                                           const TrapSet& selected_traps = {}) const;
  /// Pairs ranked by retrieval score against `origin`; without an origin,
  /// a seeded random sample.
  [[nodiscard]] std::vector<RewritePair> rewrite_pairs(AttributeKind attribute, const ThoughtRecord* origin) const;
  [[nodiscard]] PromptAssembly rewrite_prompt(std::string_view base_text, AttributeKind attribute,
                                              Direction direction, const ThoughtRecord* origin) const;

  ReframeCandidate generate_reframe(const ThoughtRecord& record, const TrapSet& selected_traps = {}) const;
  /// (addresses traps, does not address traps).
  std::pair<ReframeCandidate, ReframeCandidate> generate_trap_variants(const ThoughtRecord& record,
                                                                       const TrapSet& selected_traps = {}) const;
  ReframeCandidate rewrite_attribute(const ReframeCandidate& base, AttributeKind attribute, Direction direction,
                                     const ThoughtRecord* origin = nullptr) const;
  /// [low, base, high] for comparable attributes; [not addressed, addressed]
  /// for AddressesTraps. Texts within a set are distinct.
  std::vector<ReframeCandidate> generate_condition_set(const ThoughtRecord& record, AttributeKind attribute,
                                                       const TrapSet& selected_traps = {}) const;

private:
  /// The single egress: samples the prompt until the cleaned text passes
  /// safety. Throws Error(SafetyExhausted) or Error(EmptyCompletion).
  std::string sample_safe(const std::string& prompt) const;
  ReframeCandidate emit(std::string text, Variant variant) const;

  dataset::DatasetSnapshot examples_;
  const providers::CompletionProvider& completion_;
  const providers::EmbeddingProvider& embedding_;
  SafetyFilter safety_;
  GeneratorConfig config_;
};

}  // namespace reframe::generation
