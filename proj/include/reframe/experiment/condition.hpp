#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reframe/core/attributes.hpp"
#include "reframe/core/random.hpp"

namespace reframe::experiment {

enum class StudyMode { Preference, Outcome };

std::string_view to_string(StudyMode m) noexcept;
StudyMode parse_study_mode(std::string_view s);

/// Number of reframes a trial shows: three levels for a comparable
/// attribute, two for trap addressing, one in outcome mode.
std::size_t candidate_count(StudyMode mode, std::optional<AttributeKind> attribute);

struct ExperimentCondition {
  StudyMode mode = StudyMode::Outcome;
  std::optional<AttributeKind> attribute;
  /// display_order[i] is the generated-candidate index shown in position i.
  std::vector<std::size_t> display_order;

  /// Throws Error(InvalidInput) when the invariants do not hold.
  void validate() const;
};

struct AssignmentConfig {
  /// Probability that a session joins the preference study.
  double preference_share = 0.5;
};

/// Draws one condition from an RNG stream.
ExperimentCondition assign_condition(Rng& stream, const AssignmentConfig& config = {});

/// Per-session condition derived from the study seed and session id, so a
/// session's assignment does not depend on arrival order.
ExperimentCondition assign_condition(std::string_view session_id, std::uint64_t study_seed,
                                     const AssignmentConfig& config = {});

}  // namespace reframe::experiment
