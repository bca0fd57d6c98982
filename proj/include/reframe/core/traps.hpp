#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace reframe {

/// The thirteen thinking traps (cognitive distortions) of the taxonomy.
enum class ThinkingTrap : std::uint8_t {
  AllOrNothingThinking,
  Overgeneralizing,
  Labeling,
  FortuneTelling,
  MindReading,
  EmotionalReasoning,
  ShouldStatements,
  Personalizing,
  DisqualifyingThePositive,
  Catastrophizing,
  ComparingAndDespairing,
  Blaming,
  NegativeFeelingOrEmotion,
};

inline constexpr std::size_t kTrapCount = 13;

using TrapSet = std::set<ThinkingTrap>;

struct TrapInfo {
  ThinkingTrap trap;
  std::string_view name;
  std::string_view description;
  std::string_view example;
};

const std::array<TrapInfo, kTrapCount>& trap_taxonomy() noexcept;

/// Display name, e.g. "All-or-Nothing Thinking".
std::string_view canonical_name(ThinkingTrap trap) noexcept;
const TrapInfo& trap_info(ThinkingTrap trap) noexcept;

/// Case-insensitive; spaces, hyphens and underscores are ignored.
/// Throws Error(UnknownTrap).
ThinkingTrap parse_trap(std::string_view name);

/// Comma-joined canonical names in taxonomy order.
std::string join_traps(const TrapSet& traps, std::string_view separator = ", ");

}  // namespace reframe
