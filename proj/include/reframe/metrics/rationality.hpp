#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/core/types.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::metrics {

/// One statement in the reasoning-strength tree. The root holds the reframe;
/// every other node holds an explanation generated for its parent.
struct ReasoningNode {
  std::string statement;
  double p_sound = 0.0;
  double p_flawed = 0.0;
  std::vector<ReasoningNode> supporting;
  std::vector<ReasoningNode> refuting;
  int depth = 0;  // root = 0
  double rs = 0.0;
  bool complete = true;  // false only inside a partial tree from a failed run

  [[nodiscard]] bool is_leaf() const noexcept { return supporting.empty() && refuting.empty(); }
  [[nodiscard]] std::size_t node_count() const noexcept;
};

struct RationalityConfig {
  /// Number of node levels, root included. 1 scores the reframe alone.
  int max_depth = 3;
  /// Supporting and refuting explanations generated per non-leaf node.
  int branching = 3;
  std::string sound_word = "sound";
  std::string flawed_word = "flawed";
  int explanation_max_tokens = 64;
  double explanation_temperature = 0.7;
  double explanation_top_p = 1.0;
  /// Maximum concurrent provider calls during tree expansion.
  int parallelism = 1;

  /// Throws Error(InvalidInput).
  void validate() const;
};

/// Thrown when a provider call fails mid-tree. `partial_tree()` holds what
/// was built; nodes on the failing path have complete == false.
class RationalityError : public Error {
public:
  RationalityError(ErrorCode code, const std::string& what, ReasoningNode partial)
      : Error(code, what), partial_(std::move(partial))
  {
  }
  [[nodiscard]] const ReasoningNode& partial_tree() const noexcept { return partial_; }

private:
  ReasoningNode partial_;
};

struct RationalityResult {
  double score = 0.0;
  ReasoningNode tree;
};

std::string render_soundness_prompt(const ThoughtRecord& record, std::string_view statement);
/// Supporting (sound) or refuting (flawed) explanation prompt over the shipped
/// demonstrations; it ends with "<verdict> because".
std::string render_explanation_prompt(const ThoughtRecord& record, std::string_view statement,
                                      std::string_view verdict, bool supporting);

/// Reasoning strength:
///   RS(node) = p_sound * mean(RS(supporting)) - p_flawed * mean(RS(refuting))
/// with RS(leaf) = p_sound - p_flawed. Probabilities come from the next-token
/// distribution over the sound/flawed words after the soundness prompt.
RationalityResult rationality(const providers::CompletionProvider& provider, const ThoughtRecord& record,
                              std::string_view reframe, const RationalityConfig& cfg = {});

/// Recomputes RS for `node` from its stored probabilities and children.
double reasoning_strength(const ReasoningNode& node);

/// Throws Error(OutOfRange) if any node's rs lies outside [-1, 1] or its
/// probabilities do not sum to 1.
void check_tree_bounds(const ReasoningNode& node);

}  // namespace reframe::metrics
