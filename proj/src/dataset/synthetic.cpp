#include "reframe/dataset/synthetic.hpp"

#include <array>
#include <string>
#include <string_view>

#include "reframe/core/random.hpp"

namespace reframe::dataset {
namespace {

constexpr std::array<std::string_view, 20> kPeople{
    "my manager", "my sister",    "a close friend", "my partner",  "my roommate",
    "my teacher", "a coworker",   "my neighbor",    "my father",   "my mother",
    "my coach",   "my landlord",  "a classmate",    "my brother",  "my doctor",
    "my team",    "an old friend", "my cousin",     "my mentor",   "my boss"};

constexpr std::array<std::string_view, 24> kEvents{
    "did not reply to my message",        "cancelled our plans at the last minute",
    "gave me critical feedback",          "forgot my birthday",
    "asked to talk to me tomorrow",       "left the meeting early",
    "was quiet during dinner",            "posted photos from a party I missed",
    "did not invite me to the trip",      "corrected me in front of everyone",
    "asked me to redo the report",        "sounded annoyed on the phone",
    "rescheduled my appointment",         "chose someone else for the project",
    "did not laugh at my joke",           "raised the rent again",
    "mentioned my mistake from last week", "ended the call abruptly",
    "seemed distracted while I talked",   "praised another person's work",
    "asked why I was late",               "did not read my proposal",
    "took a long time to answer my email", "said we need to discuss something"};

constexpr std::array<std::string_view, 10> kTimes{
    "this morning", "yesterday", "last night", "today", "on Friday",
    "during lunch", "this week", "at the party", "after class", "on Monday"};

constexpr std::array<std::string_view, 26> kThoughts{
    "Nobody ever wants to spend time with me.",
    "I am going to lose my job.",
    "I always ruin everything.",
    "They must think I am useless.",
    "This proves I am a failure.",
    "Everyone is secretly angry with me.",
    "I should be able to handle this without any help.",
    "It is all my fault that things went wrong.",
    "Nothing I do is ever good enough.",
    "I will never get better at this.",
    "They only tolerate me out of pity.",
    "If it is not perfect, I have failed completely.",
    "I feel anxious, so something bad must be coming.",
    "Everyone else has their life together except me.",
    "I am such an idiot for letting this happen.",
    "The good feedback I got earlier does not count.",
    "This is going to be a complete disaster.",
    "I am stuck feeling lonely and it will never change.",
    "They made me feel this way, so there is nothing I can do.",
    "I know they are going to leave me.",
    "I am a terrible friend.",
    "I will embarrass myself at the next meeting.",
    "Other people are so much more successful than I am.",
    "I must have done something wrong.",
    "I only got that result because I was lucky.",
    "Things will only get worse from here."};

constexpr std::array<std::string_view, 16> kReframeOpeners{
    "It is understandable to feel hurt, but",
    "I feel disappointed right now, and",
    "This moment is hard, yet",
    "One event does not define me, and",
    "I do not know the whole story, so",
    "My feelings are valid, but",
    "Looking at the evidence,",
    "I have handled difficult moments before, and",
    "It makes sense that this stings, but",
    "I can be kind to myself here because",
    "Instead of assuming the worst,",
    "Even if this did not go as planned,",
    "I cannot read their mind, and",
    "This is one part of a longer story, and",
    "I am allowed to make mistakes, and",
    "Taking a breath,"};

constexpr std::array<std::string_view, 18> kReframeBodies{
    "there could be many reasons for what happened.",
    "I can ask them directly how they are doing.",
    "I can write down three things that went well this week.",
    "I will plan one small step to prepare for tomorrow.",
    "most of the time my relationships are steady.",
    "I can check in with a friend I trust this evening.",
    "I can learn something useful from this feedback.",
    "one setback does not mean everything will go wrong.",
    "I can focus on what is within my control.",
    "I will take a short walk and then revisit the problem.",
    "people are often busy and it is rarely about me.",
    "I can schedule a time to talk things through calmly.",
    "I have made progress even if it feels slow.",
    "I can remind myself of times I handled this well.",
    "it is okay to ask for support when I need it.",
    "I can give myself credit for the effort I made.",
    "I can wait for more information before deciding what it means.",
    "small improvements add up over time."};

template <typename Array>
std::string_view pick(Rng& rng, const Array& table)
{
  return table[static_cast<std::size_t>(rng.uniform_index(table.size()))];
}

std::string capitalize(std::string s)
{
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

TrapSet random_traps(Rng& rng, double p_nonempty)
{
  TrapSet traps;
  if (!rng.bernoulli(p_nonempty)) return traps;
  const auto count = 1 + rng.uniform_index(2);
  for (std::uint64_t i = 0; i < count; ++i) {
    traps.insert(static_cast<ThinkingTrap>(rng.uniform_index(kTrapCount)));
  }
  return traps;
}

}  // namespace

std::vector<DatasetEntry> make_synthetic_dataset(std::size_t n, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<DatasetEntry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string situation;
    std::string thought;
    if (i > 0 && i % 40 == 0) {
      const auto& earlier = out[static_cast<std::size_t>(rng.uniform_index(i))];
      situation = earlier.record.situation();
      thought = earlier.record.thought();
    }
    else {
      situation = capitalize(std::string(pick(rng, kPeople)) + " " + std::string(pick(rng, kEvents)) + " " +
                             std::string(pick(rng, kTimes)) + ".");
      thought = std::string(pick(rng, kThoughts));
    }

    const std::string reframe_a = std::string(pick(rng, kReframeOpeners)) + " " + std::string(pick(rng, kReframeBodies));
    std::string reframe_b = reframe_a;
    while (reframe_b == reframe_a) {
      reframe_b = std::string(pick(rng, kReframeOpeners)) + " " + std::string(pick(rng, kReframeBodies));
    }

    DatasetEntry e{
        .id = "syn-" + std::to_string(i + 1),
        .source = DatasetSource::Synthetic,
        .record = ThoughtRecord(situation, thought),
        .reframe_a = reframe_a,
        .reframe_b = reframe_b,
        .traps_a = random_traps(rng, 0.6),
        .traps_b = random_traps(rng, 0.5),
        .comparisons = {},
    };
    for (const auto a : kComparableAttributes) e.comparisons[a] = rng.bernoulli(0.5) ? Choice::A : Choice::B;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace reframe::dataset
