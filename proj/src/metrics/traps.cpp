#include "reframe/metrics/traps.hpp"

#include "reframe/core/prompt_template.hpp"
#include "reframe/core/text.hpp"

namespace reframe::metrics {

std::vector<LabeledExample> labeled_examples(const dataset::DatasetSnapshot& snapshot,
                                             std::span<const dataset::ScoredExample> retrieved)
{
  std::vector<LabeledExample> out;
  for (const auto& r : retrieved) {
    const auto& e = snapshot.entry(r.index);
    for (const auto choice : {Choice::A, Choice::B}) {
      out.push_back({e.record.situation(), e.record.thought(), e.reframe(choice), e.traps(choice)});
    }
  }
  return out;
}

std::string render_trap_prompt(const ThoughtRecord& record, std::string_view text,
                               std::span<const LabeledExample> examples)
{
  static const auto tpl = PromptTemplate::from_asset("templates/trap_classify.v1.txt");
  TemplateScope scope;
  scope.set("situation", record.situation()).set("thought", record.thought()).set("text", std::string(text));
  for (const auto& info : trap_taxonomy()) {
    scope.add("taxonomy", TemplateScope{}
                              .set("name", std::string(info.name))
                              .set("description", std::string(info.description)));
  }
  for (const auto& ex : examples) {
    scope.add("examples", TemplateScope{}
                              .set("situation", ex.situation)
                              .set("thought", ex.thought)
                              .set("text", ex.text)
                              .set("traps", ex.traps.empty() ? std::string("None") : join_traps(ex.traps)));
  }
  return tpl.render(scope);
}

TrapSet parse_trap_list(std::string_view completion)
{
  std::string line;
  for (const auto& l : text::split_lines(completion)) {
    if (!text::trim(l).empty()) {
      line = std::string(text::trim(l));
      break;
    }
  }
  TrapSet out;
  for (const auto& part : text::split(line, ',')) {
    auto name = text::strip_quotes(part);
    while (!name.empty() && (name.back() == '.' || name.back() == ';')) name.pop_back();
    if (text::trim(name).empty() || text::iequals(text::trim(name), "none")) continue;
    try {
      out.insert(parse_trap(name));
    }
    catch (const Error&) {
      // Unknown labels are dropped.
    }
  }
  return out;
}

TrapSet classify_traps(const providers::CompletionProvider& provider, const ThoughtRecord& record,
                       std::string_view text, std::span<const LabeledExample> examples)
{
  if (text::trim(text).empty()) throw Error(ErrorCode::InvalidInput, "text to classify must not be empty");
  providers::CompletionRequest req;
  req.prompt = render_trap_prompt(record, text, examples);
  req.max_tokens = 48;
  req.temperature = 0.0;
  req.stop = {"\n"};
  const auto result = provider.complete(req);
  return parse_trap_list(result.choices.front().text);
}

}  // namespace reframe::metrics
