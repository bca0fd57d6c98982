#include "reframe/experiment/condition.hpp"

#include <algorithm>

#include "reframe/core/error.hpp"

namespace reframe::experiment {

std::string_view to_string(StudyMode m) noexcept
{
  return m == StudyMode::Preference ? "preference" : "outcome";
}

StudyMode parse_study_mode(std::string_view s)
{
  if (s == "preference") return StudyMode::Preference;
  if (s == "outcome") return StudyMode::Outcome;
  throw Error(ErrorCode::InvalidInput, "unknown study mode: " + std::string(s));
}

std::size_t candidate_count(StudyMode mode, std::optional<AttributeKind> attribute)
{
  if (mode == StudyMode::Outcome) return 1;
  if (!attribute) throw Error(ErrorCode::InvalidInput, "preference condition needs an attribute");
  return *attribute == AttributeKind::AddressesTraps ? 2 : 3;
}

void ExperimentCondition::validate() const
{
  if (mode == StudyMode::Preference && !attribute) {
    throw Error(ErrorCode::InvalidInput, "preference condition needs an attribute");
  }
  if (mode == StudyMode::Outcome && attribute) {
    throw Error(ErrorCode::InvalidInput, "outcome condition carries no attribute");
  }
  const auto n = candidate_count(mode, attribute);
  if (display_order.size() != n) throw Error(ErrorCode::InvalidInput, "display order has the wrong length");
  auto sorted = display_order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (sorted[i] != i) throw Error(ErrorCode::InvalidInput, "display order is not a permutation");
  }
}

ExperimentCondition assign_condition(Rng& stream, const AssignmentConfig& config)
{
  if (!(config.preference_share >= 0.0 && config.preference_share <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "preference_share must lie in [0, 1]");
  }
  ExperimentCondition c;
  c.mode = stream.bernoulli(config.preference_share) ? StudyMode::Preference : StudyMode::Outcome;
  if (c.mode == StudyMode::Preference) {
    c.attribute = kAllAttributes[static_cast<std::size_t>(stream.uniform_index(kAllAttributes.size()))];
  }
  c.display_order = stream.permutation(candidate_count(c.mode, c.attribute));
  return c;
}

ExperimentCondition assign_condition(std::string_view session_id, std::uint64_t study_seed,
                                     const AssignmentConfig& config)
{
  Rng stream(fnv1a64(session_id, study_seed ^ 0xcbf29ce484222325ULL));
  return assign_condition(stream, config);
}

}  // namespace reframe::experiment
