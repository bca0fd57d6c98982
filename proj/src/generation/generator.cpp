#include "reframe/generation/generator.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "reframe/core/prompt_template.hpp"
#include "reframe/core/random.hpp"
#include "reframe/core/text.hpp"
#include "reframe/dataset/retrieval.hpp"

namespace reframe::generation {

namespace {

const PromptTemplate& generate_template()
{
  static const auto tpl = PromptTemplate::from_asset("templates/generate.v1.txt");
  return tpl;
}

const PromptTemplate& rewrite_template()
{
  static const auto tpl = PromptTemplate::from_asset("templates/rewrite.v1.txt");
  return tpl;
}

std::string_view attribute_phrase(AttributeKind a, Direction d)
{
  const bool high = d == Direction::High;
  switch (a) {
    case AttributeKind::Rationality: return high ? "more rational and better reasoned" : "less rational and less well reasoned";
    case AttributeKind::Positivity: return high ? "more positive" : "less positive";
    case AttributeKind::Empathy: return high ? "more empathic" : "less empathic";
    case AttributeKind::Actionability: return high ? "more actionable" : "less actionable";
    case AttributeKind::Specificity: return high ? "more specific to the situation" : "less specific to the situation";
    case AttributeKind::Readability: return high ? "more readable" : "less readable";
    case AttributeKind::AddressesTraps: break;
  }
  throw Error(ErrorCode::InvalidInput, "attribute rewriting needs a comparable attribute");
}

struct Demo {
  std::size_t index;
  Choice choice;
};

PromptAssembly render_generation(const dataset::DatasetSnapshot& snapshot, const std::vector<Demo>& demos,
                                 const ThoughtRecord& record, const TrapSet& selected_traps)
{
  const auto& tpl = generate_template();
  TemplateScope scope;
  scope.set("situation", record.situation()).set("thought", record.thought());
  PromptAssembly out{tpl.id(), {}, {}};
  for (const auto& d : demos) {
    const auto& e = snapshot.entry(d.index);
    scope.add("examples", TemplateScope{}
                              .set("situation", e.record.situation())
                              .set("thought", e.record.thought())
                              .set("reframe", e.reframe(d.choice)));
    out.example_ids.push_back(e.id);
  }
  if (!selected_traps.empty()) scope.add("selected_traps", TemplateScope{}.set("traps", join_traps(selected_traps)));
  out.rendered = tpl.render(scope);
  return out;
}

}  // namespace

std::string clean_completion(std::string_view completion)
{
  return text::strip_quotes(text::first_paragraph(completion));
}

ReframeGenerator::ReframeGenerator(dataset::DatasetSnapshot examples, const providers::CompletionProvider& completion,
                                   const providers::EmbeddingProvider& embedding, SafetyFilter safety,
                                   GeneratorConfig config)
    : examples_(std::move(examples)), completion_(completion), embedding_(embedding), safety_(std::move(safety)),
      config_(config)
{
  if (config_.k < 1) throw Error(ErrorCode::InvalidInput, "k must be >= 1");
  if (config_.max_safety_attempts < 1) throw Error(ErrorCode::InvalidInput, "max_safety_attempts must be >= 1");
}

PromptAssembly ReframeGenerator::generation_prompt(const ThoughtRecord& record, const TrapSet& selected_traps) const
{
  if (examples_.empty()) throw Error(ErrorCode::EmptyDataset, "generation needs a nonempty dataset");
  const auto retrieved = dataset::retrieve_similar(examples_, embedding_, record, config_.k);
  std::vector<Demo> demos;
  for (const auto& r : retrieved) demos.push_back({r.index, Choice::A});
  return render_generation(examples_, demos, record, selected_traps);
}

PromptAssembly ReframeGenerator::trap_prompt(const ThoughtRecord& record, bool addressing,
                                             const TrapSet& selected_traps) const
{
  // Pool membership: the first reframe of an entry whose trap labels match.
  std::vector<std::optional<Choice>> pick(examples_.size());
  std::size_t pool_size = 0;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const auto& e = examples_.entry(i);
    for (const auto c : {Choice::A, Choice::B}) {
      if (e.traps(c).empty() != addressing) {
        pick[i] = c;
        ++pool_size;
        break;
      }
    }
  }
  if (pool_size < config_.k) throw PoolTooSmallError(addressing ? "yes" : "no", pool_size, config_.k);
  const auto query = dataset::embed_query(embedding_, record);
  const auto retrieved =
      dataset::retrieve_similar(examples_, query, config_.k, [&pick](std::size_t i) { return pick[i].has_value(); });
  std::vector<Demo> demos;
  for (const auto& r : retrieved) demos.push_back({r.index, *pick[r.index]});
  return render_generation(examples_, demos, record, selected_traps);
}

std::vector<RewritePair> ReframeGenerator::rewrite_pairs(AttributeKind attribute, const ThoughtRecord* origin) const
{
  if (!is_comparable(attribute)) {
    throw Error(ErrorCode::InvalidInput, "rewrite pairs exist only for comparable attributes");
  }
  if (examples_.empty()) throw Error(ErrorCode::NoRewritePairs, "no annotated entries to draw rewrite pairs from");

  std::vector<std::size_t> chosen;
  if (origin != nullptr) {
    for (const auto& r : dataset::retrieve_similar(examples_, embedding_, *origin, config_.k)) chosen.push_back(r.index);
  }
  else {
    Rng rng(config_.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(attribute) + 1)));
    auto order = rng.permutation(examples_.size());
    order.resize(std::min(order.size(), config_.k));
    chosen = std::move(order);
  }

  std::vector<RewritePair> out;
  for (const auto i : chosen) {
    const auto& e = examples_.entry(i);
    const auto winner = e.comparisons.at(attribute);
    const auto loser = winner == Choice::A ? Choice::B : Choice::A;
    out.push_back({attribute, e.id, e.reframe(loser), e.reframe(winner)});
  }
  return out;
}

PromptAssembly ReframeGenerator::rewrite_prompt(std::string_view base_text, AttributeKind attribute,
                                                Direction direction, const ThoughtRecord* origin) const
{
  const auto pairs = rewrite_pairs(attribute, origin);
  const auto& tpl = rewrite_template();
  TemplateScope scope;
  scope.set("instruction", "Rewrite each reframed thought so that it is " +
                               std::string(attribute_phrase(attribute, direction)) + ".");
  scope.set("base", std::string(text::trim(base_text)));
  PromptAssembly out{tpl.id(), {}, {}};
  for (const auto& p : pairs) {
    const bool up = direction == Direction::High;
    scope.add("examples", TemplateScope{}.set("from", up ? p.low_text : p.high_text).set("to", up ? p.high_text : p.low_text));
    out.example_ids.push_back(p.entry_id);
  }
  out.rendered = tpl.render(scope);
  return out;
}

std::string ReframeGenerator::sample_safe(const std::string& prompt) const
{
  providers::CompletionRequest req;
  req.prompt = prompt;
  req.top_p = config_.top_p;
  req.temperature = config_.temperature;
  req.max_tokens = config_.max_tokens;
  req.n = 1;
  req.stop = {"\n\n"};
  std::optional<std::string> last_block;
  for (int attempt = 0; attempt < config_.max_safety_attempts; ++attempt) {
    const auto result = completion_.complete(req);
    auto text = clean_completion(result.choices.front().text);
    if (text.empty()) throw Error(ErrorCode::EmptyCompletion, "provider returned an empty reframe");
    const auto verdict = safety_.check(text);
    if (verdict.allowed) return text;
    last_block = verdict.matched_pattern;
  }
  throw Error(ErrorCode::SafetyExhausted, "all " + std::to_string(config_.max_safety_attempts) +
                                              " samples were blocked by the safety filter (last pattern: " +
                                              last_block.value_or("?") + ")");
}

ReframeCandidate ReframeGenerator::emit(std::string text, Variant variant) const
{
  if (!safety_.check(text).allowed) throw Error(ErrorCode::SafetyExhausted, "blocked text reached egress");
  return ReframeCandidate(std::move(text), variant);
}

ReframeCandidate ReframeGenerator::generate_reframe(const ThoughtRecord& record, const TrapSet& selected_traps) const
{
  return emit(sample_safe(generation_prompt(record, selected_traps).rendered), Variant::base());
}

std::pair<ReframeCandidate, ReframeCandidate>
ReframeGenerator::generate_trap_variants(const ThoughtRecord& record, const TrapSet& selected_traps) const
{
  const auto yes_prompt = trap_prompt(record, true, selected_traps);
  const auto no_prompt = trap_prompt(record, false, selected_traps);
  auto yes = emit(sample_safe(yes_prompt.rendered), Variant::trap_addressed());
  auto no = emit(sample_safe(no_prompt.rendered), Variant::trap_not_addressed());
  return {std::move(yes), std::move(no)};
}

ReframeCandidate ReframeGenerator::rewrite_attribute(const ReframeCandidate& base, AttributeKind attribute,
                                                     Direction direction, const ThoughtRecord* origin) const
{
  if (!is_comparable(attribute)) {
    throw Error(ErrorCode::InvalidInput, "use generate_trap_variants for trap addressing");
  }
  if (!safety_.check(base.text()).allowed) throw Error(ErrorCode::InvalidInput, "base reframe did not pass safety");
  const auto prompt = rewrite_prompt(base.text(), attribute, direction, origin);
  return emit(sample_safe(prompt.rendered), direction == Direction::High ? Variant::high(attribute) : Variant::low(attribute));
}

std::vector<ReframeCandidate> ReframeGenerator::generate_condition_set(const ThoughtRecord& record,
                                                                      AttributeKind attribute,
                                                                      const TrapSet& selected_traps) const
{
  std::vector<ReframeCandidate> out;
  std::vector<std::string> prompts;
  if (attribute == AttributeKind::AddressesTraps) {
    prompts = {trap_prompt(record, false, selected_traps).rendered, trap_prompt(record, true, selected_traps).rendered};
    out.push_back(emit(sample_safe(prompts[0]), Variant::trap_not_addressed()));
    out.push_back(emit(sample_safe(prompts[1]), Variant::trap_addressed()));
  }
  else {
    auto base = generate_reframe(record, selected_traps);
    prompts = {rewrite_prompt(base.text(), attribute, Direction::Low, &record).rendered,
               generation_prompt(record, selected_traps).rendered,
               rewrite_prompt(base.text(), attribute, Direction::High, &record).rendered};
    auto low = std::async(std::launch::async,
                          [&] { return rewrite_attribute(base, attribute, Direction::Low, &record); });
    auto high = std::async(std::launch::async,
                           [&] { return rewrite_attribute(base, attribute, Direction::High, &record); });
    auto low_c = low.get();
    auto high_c = high.get();
    out.push_back(std::move(low_c));
    out.push_back(std::move(base));
    out.push_back(std::move(high_c));
  }

  for (std::size_t i = 1; i < out.size(); ++i) {
    auto collides = [&] {
      for (std::size_t j = 0; j < i; ++j) {
        if (out[j].text() == out[i].text()) return true;
      }
      return false;
    };
    int attempts = 0;
    while (collides()) {
      if (++attempts > config_.max_duplicate_attempts) {
        throw Error(ErrorCode::DuplicateVariants,
                    "variants kept producing identical text after " + std::to_string(config_.max_duplicate_attempts) +
                        " regenerations");
      }
      out[i] = emit(sample_safe(prompts[i]), out[i].variant());
    }
  }
  return out;
}

}  // namespace reframe::generation
