#include "reframe/service/demo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "reframe/core/random.hpp"
#include "reframe/core/text.hpp"
#include "reframe/dataset/synthetic.hpp"

namespace reframe::service {

namespace {

constexpr std::array<std::string_view, 12> kReframes{
    "One hard day does not decide everything, and I can take the next step slowly.",
    "I made a mistake, but I can learn from it and talk to someone I trust.",
    "It makes sense to feel worried, and I can focus on what I can control today.",
    "I do not know how this will turn out yet, so I will wait for more information.",
    "This feels heavy right now, but I have handled difficult weeks before.",
    "I can ask for help instead of carrying this alone.",
    "Not everyone is judging me; most people are busy with their own lives.",
    "I can write down what went well today, even if it was small.",
    "Feeling nervous is normal, and I can prepare a little each evening.",
    "My worth is not defined by one result, and I can try again next time.",
    "I can call a friend tonight and share how I have been feeling.",
    "Things are uncertain, but I can plan one small action for tomorrow.",
};

constexpr std::array<std::string_view, 10> kActions{
    "Write down three things that went well today.",
    "Call a close friend this evening.",
    "Take a short walk outside.",
    "Make a list of next steps for tomorrow.",
    "Ask a coworker for feedback.",
    "Schedule time to rest this weekend.",
    "Practice slow breathing for five minutes.",
    "Send a message to a family member.",
    "Break the task into smaller pieces.",
    "Prepare notes before the next meeting.",
};

constexpr std::array<std::string_view, 6> kExplanations{
    "it stays close to what actually happened.",
    "it does not ignore the difficulty of the situation.",
    "it avoids predicting the worst without evidence.",
    "it assumes things will work out without a reason.",
    "it dismisses a real concern too quickly.",
    "it draws a firm conclusion from a single event.",
};

struct KeywordTrap {
  std::string_view keyword;
  std::string_view trap;
};

constexpr std::array<KeywordTrap, 14> kTrapKeywords{{
    {"always", "Overgeneralizing"},
    {"never", "Overgeneralizing"},
    {"should", "Should Statements"},
    {"stupid", "Labeling"},
    {"failure", "Labeling"},
    {"disaster", "Catastrophizing"},
    {"ruined", "Catastrophizing"},
    {"everyone", "Mind Reading"},
    {"they think", "Mind Reading"},
    {"will fail", "Fortune Telling"},
    {"going to", "Fortune Telling"},
    {"the future", "Fortune Telling"},
    {"my fault", "Personalizing"},
    {"feel like", "Emotional Reasoning"},
}};

bool ends_with_cue(std::string_view prompt, std::string_view cue)
{
  const auto t = text::trim(prompt);
  return t.size() >= cue.size() && t.substr(t.size() - cue.size()) == cue;
}

/// Text after the last occurrence of `label` on its line.
std::string last_field(std::string_view prompt, std::string_view label)
{
  const auto pos = prompt.rfind(label);
  if (pos == std::string_view::npos) return {};
  const auto start = pos + label.size();
  const auto end = prompt.find('\n', start);
  return std::string(text::trim(prompt.substr(start, end == std::string_view::npos ? end : end - start)));
}

std::string rewrite(std::string_view prompt)
{
  const auto base = last_field(prompt, "Original:");
  const auto lines = text::split_lines(prompt);
  std::string instruction;
  for (const auto& l : lines) {
    if (!text::trim(l).empty()) {
      instruction = text::to_lower(l);
      break;
    }
  }
  const bool more = instruction.find(" more ") != std::string::npos;
  struct Cue {
    std::string_view word;
    std::string_view up;
    std::string_view down;
  };
  static constexpr std::array<Cue, 6> kCues{{
      {"rational", " Looking at the facts, this is one event and not a pattern.", " Everything is probably going wrong."},
      {"positive", " I am hopeful about what comes next.", " It is still pretty bad."},
      {"empathic", " It is understandable to feel this way, and it makes sense that this is hard.", " Just move on."},
      {"actionable", " Tonight I will write down one step and do it tomorrow.", " Whatever."},
      {"specific", " This is about the meeting on Monday and what my manager said.", " Things happen."},
      {"readable", " It is ok.", " Notwithstanding the aforementioned considerations, circumstances may nevertheless evolve unpredictably."},
  }};
  for (const auto& c : kCues) {
    if (instruction.find(c.word) == std::string::npos) continue;
    if (more) return base + std::string(c.up);
    // Keep the first clause of the original, then dilute it.
    auto cut = base.find_first_of(",;.");
    auto head = base.substr(0, cut == std::string::npos ? base.size() : cut);
    return head + "." + std::string(c.down);
  }
  return base;
}

std::string detect_traps(std::string_view prompt)
{
  const auto subject = text::to_lower(last_field(prompt, "Text:"));
  std::vector<std::string> found;
  for (const auto& kt : kTrapKeywords) {
    if (subject.find(kt.keyword) != std::string::npos &&
        std::find(found.begin(), found.end(), kt.trap) == found.end()) {
      found.emplace_back(kt.trap);
    }
  }
  if (found.empty()) return " None";
  std::string out;
  for (const auto& f : found) out += (out.empty() ? " " : ", ") + f;
  return out;
}

std::string proposed_action(std::string_view prompt)
{
  auto statement = text::strip_quotes(last_field(prompt, "Statement:"));
  const auto lower = text::to_lower(statement);
  for (const auto cue : {"i will", "i can call", "i can write", "i can ask", "i can plan", "i can prepare", "talk to"}) {
    if (lower.find(cue) != std::string::npos) return " \"" + statement + "\"";
  }
  return " None";
}

}  // namespace

providers::CompletionResult DemoCompletionProvider::complete(const providers::CompletionRequest& req) const
{
  req.validate();
  providers::CompletionResult out;
  for (int i = 0; i < req.n; ++i) out.choices.push_back(answer(req, i));
  return out;
}

providers::CompletionChoice DemoCompletionProvider::answer(const providers::CompletionRequest& req, int index) const
{
  const auto h = fnv1a64(req.prompt, seed_ + static_cast<std::uint64_t>(index) * 0x100000001b3ULL);
  const auto& p = req.prompt;
  if (ends_with_cue(p, "This reframed thought is")) {
    // Soundness lies in [0.55, 0.95] and depends only on the statement.
    const auto statement = last_field(p, "Reframed thought:");
    const double sound = 0.55 + 0.4 * static_cast<double>(fnv1a64(statement, seed_) % 1000) / 999.0;
    return {" sound", {{" sound", std::log(sound * 0.9)}, {" flawed", std::log((1.0 - sound) * 0.9)}, {" a", std::log(0.05)}}};
  }
  if (ends_with_cue(p, "because")) return {" " + std::string(kExplanations[h % kExplanations.size()]), {}};
  if (ends_with_cue(p, "Reframed thought:")) return {" " + std::string(kReframes[h % kReframes.size()]), {}};
  if (ends_with_cue(p, "Rewritten:")) return {" " + rewrite(p), {}};
  if (ends_with_cue(p, "Thinking traps:")) return {detect_traps(p), {}};
  if (ends_with_cue(p, "Proposed Action:")) return {proposed_action(p), {}};
  if (ends_with_cue(p, "Write one action per line.")) {
    std::string lines;
    for (std::size_t i = 0; i < 5; ++i) {
      lines += std::to_string(i + 1) + ". " + std::string(kActions[(h + i * 3) % kActions.size()]) + "\n";
    }
    return {lines, {}};
  }
  return {" None", {}};
}

double demo_sentiment(std::string_view text)
{
  static constexpr std::array<std::string_view, 10> kGood{"can", "hopeful", "well", "help", "learn", "ok", "trust", "handled", "small", "rest"};
  static constexpr std::array<std::string_view, 8> kBad{"bad", "wrong", "worried", "heavy", "hard", "nervous", "whatever", "fail"};
  double score = 0.5;
  for (const auto& w : text::split_whitespace(text::to_lower(text))) {
    std::string t;
    for (const char c : w) {
      if (std::isalpha(static_cast<unsigned char>(c))) t += c;
    }
    if (std::find(kGood.begin(), kGood.end(), t) != kGood.end()) score += 0.08;
    if (std::find(kBad.begin(), kBad.end(), t) != kBad.end()) score -= 0.1;
  }
  return std::clamp(score, 0.0, 1.0);
}

double demo_empathy(std::string_view text)
{
  static constexpr std::array<std::string_view, 6> kPhrases{"understandable", "makes sense", "it is ok", "normal", "hard", "feel"};
  const auto lower = text::to_lower(text);
  double score = 1.0;
  for (const auto p : kPhrases) {
    if (lower.find(p) != std::string::npos) score += 1.0;
  }
  return std::min(score, 6.0);
}

DemoProviders::DemoProviders(std::uint64_t seed)
    : completion(seed), embedding(256, seed), sentiment(demo_sentiment), empathy(demo_empathy)
{
}

dataset::DatasetSnapshot demo_dataset(const providers::EmbeddingProvider& embedder, std::size_t n, std::uint64_t seed)
{
  return dataset::DatasetSnapshot::build(dataset::make_synthetic_dataset(n, seed), embedder);
}

}  // namespace reframe::service
