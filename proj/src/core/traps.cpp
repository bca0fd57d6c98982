#include "reframe/core/traps.hpp"

#include <cctype>

#include "reframe/core/error.hpp"

namespace reframe {
namespace {

constexpr std::array<TrapInfo, kTrapCount> kTaxonomy{{
    {ThinkingTrap::AllOrNothingThinking, "All-or-Nothing Thinking", "Thinking in extremes.",
     "If it isn't perfect, I failed. There's no such thing as \"good enough\"."},
    {ThinkingTrap::Overgeneralizing, "Overgeneralizing", "Jumping to conclusions based on one experience.",
     "They didn't text me back. Nobody ever texts me back."},
    {ThinkingTrap::Labeling, "Labeling", "Defining a person based on one action or characteristic.",
     "I said something embarrassing. I'm such a loser."},
    {ThinkingTrap::FortuneTelling, "Fortune Telling",
     "Trying to predict the future. Focusing on one possibility and ignoring other, more likely outcomes.",
     "I'm late for the meeting. I'll make a fool of myself."},
    {ThinkingTrap::MindReading, "Mind Reading", "Assuming you know what someone else is thinking.",
     "She didn't say hello. She must be mad at me."},
    {ThinkingTrap::EmotionalReasoning, "Emotional Reasoning", "Treating your feelings like facts.",
     "I woke up feeling anxious. I just know something bad is going to happen today."},
    {ThinkingTrap::ShouldStatements, "Should Statements", "Setting unrealistic expectations for yourself.",
     "I shouldn't need to ask for help. I should be independent."},
    {ThinkingTrap::Personalizing, "Personalizing", "Taking things personally or making them about you.",
     "He's quiet today. I wonder what I did wrong."},
    {ThinkingTrap::DisqualifyingThePositive, "Disqualifying the Positive",
     "When something good happens, you ignore it or think it doesn't count.",
     "I only won because I got lucky."},
    {ThinkingTrap::Catastrophizing, "Catastrophizing", "Focusing on the worst-case scenario.",
     "My boss asked if I had a few minutes to talk. I'm going to get fired!"},
    {ThinkingTrap::ComparingAndDespairing, "Comparing and Despairing",
     "Comparing your worst to someone else's best.",
     "My niece's birthday party had twice the amount of people"},
    {ThinkingTrap::Blaming, "Blaming", "Giving away your own power to other people.",
     "It's not my fault I yelled. You made me angry!"},
    {ThinkingTrap::NegativeFeelingOrEmotion, "Negative Feeling or Emotion",
     "Getting \"stuck\" on a distressing thought, emotion, or belief.", "I am feeling lonely."},
}};

std::string normalize(std::string_view s)
{
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    if (c == ' ' || c == '-' || c == '_' || c == '\t') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

const std::array<TrapInfo, kTrapCount>& trap_taxonomy() noexcept { return kTaxonomy; }

const TrapInfo& trap_info(ThinkingTrap trap) noexcept
{
  return kTaxonomy[static_cast<std::size_t>(trap)];
}

std::string_view canonical_name(ThinkingTrap trap) noexcept { return trap_info(trap).name; }

ThinkingTrap parse_trap(std::string_view name)
{
  const std::string key = normalize(name);
  for (const auto& info : kTaxonomy) {
    if (normalize(info.name) == key) return info.trap;
  }
  throw Error(ErrorCode::UnknownTrap, "unknown thinking trap: '" + std::string(name) + "'");
}

std::string join_traps(const TrapSet& traps, std::string_view separator)
{
  std::string out;
  for (const auto t : traps) {
    if (!out.empty()) out += separator;
    out += canonical_name(t);
  }
  return out;
}

}  // namespace reframe
