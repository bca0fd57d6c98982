#include "reframe/metrics/rationality.hpp"

#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <optional>

#include <json.hpp>

#include "reframe/core/assets.hpp"
#include "reframe/core/prompt_template.hpp"
#include "reframe/core/text.hpp"
#include "reframe/providers/mock.hpp"
#include "reframe/providers/probability.hpp"

namespace reframe::metrics {

namespace {

const std::vector<TemplateScope>& demonstrations(std::string_view verdict_key)
{
  static const auto parsed = [] {
    const auto j = nlohmann::json::parse(assets::get("rationality_demonstrations.v1.json"));
    std::map<std::string, std::vector<TemplateScope>, std::less<>> out;
    for (const char* key : {"sound", "flawed"}) {
      for (const auto& d : j) {
        out[key].push_back(TemplateScope{}
                               .set("situation", d.at("situation").get<std::string>())
                               .set("thought", d.at("thought").get<std::string>())
                               .set("reframe", d.at("reframe").get<std::string>())
                               .set("explanation", d.at(key).get<std::string>()));
      }
    }
    return out;
  }();
  return parsed.at(std::string(verdict_key));
}

double mean_rs(const std::vector<ReasoningNode>& nodes)
{
  double sum = 0.0;
  for (const auto& n : nodes) sum += n.rs;
  return sum / static_cast<double>(nodes.size());
}

class TreeBuilder {
public:
  TreeBuilder(const providers::CompletionProvider& provider, const ThoughtRecord& record,
              const RationalityConfig& cfg)
      : provider_(provider), record_(record), cfg_(cfg)
  {
  }

  ReasoningNode expand(const std::string& statement, int depth)
  {
    ReasoningNode node;
    node.statement = statement;
    node.depth = depth;
    node.complete = false;
    try {
      const auto p = soundness(statement);
      node.p_sound = p.first;
      node.p_flawed = p.second;
      if (depth + 1 >= cfg_.max_depth) {
        node.rs = node.p_sound - node.p_flawed;
        node.complete = true;
        return node;
      }
      auto sup_texts = explain(statement, cfg_.sound_word, true);
      auto ref_texts = explain(statement, cfg_.flawed_word, false);
      expand_children(sup_texts, depth + 1, node.supporting, node);
      expand_children(ref_texts, depth + 1, node.refuting, node);
    }
    catch (const RationalityError&) {
      throw;
    }
    catch (const Error& e) {
      throw RationalityError(e.code(), e.what(), node);
    }
    node.rs = node.p_sound * mean_rs(node.supporting) - node.p_flawed * mean_rs(node.refuting);
    node.complete = true;
    return node;
  }

private:
  // Children are expanded in generation order; with parallelism > 1 they run
  // concurrently but are stored by index, so the tree is the same.
  void expand_children(const std::vector<std::string>& texts, int depth, std::vector<ReasoningNode>& out,
                       ReasoningNode& parent)
  {
    if (cfg_.parallelism <= 1) {
      for (const auto& t : texts) {
        try {
          out.push_back(expand(t, depth));
        }
        catch (const RationalityError& e) {
          out.push_back(e.partial_tree());
          throw RationalityError(e.code(), e.what(), parent);
        }
      }
      return;
    }
    std::vector<std::future<ReasoningNode>> futures;
    futures.reserve(texts.size());
    for (const auto& t : texts) {
      futures.push_back(std::async(std::launch::async, [this, t, depth] { return expand(t, depth); }));
    }
    std::optional<RationalityError> first_error;
    for (auto& f : futures) {
      try {
        out.push_back(f.get());
      }
      catch (const RationalityError& e) {
        out.push_back(e.partial_tree());
        if (!first_error) first_error.emplace(e);
      }
    }
    if (first_error) throw RationalityError(first_error->code(), first_error->what(), parent);
  }

  std::pair<double, double> soundness(const std::string& statement)
  {
    {
      std::lock_guard lock(memo_mutex_);
      if (const auto it = memo_.find(statement); it != memo_.end()) return it->second;
    }
    const auto pair = providers::token_pair_probability(provider_, render_soundness_prompt(record_, statement),
                                                        cfg_.sound_word, cfg_.flawed_word);
    std::lock_guard lock(memo_mutex_);
    return memo_.emplace(statement, std::make_pair(pair.first, pair.second)).first->second;
  }

  std::vector<std::string> explain(const std::string& statement, const std::string& verdict, bool supporting)
  {
    providers::CompletionRequest req;
    req.prompt = render_explanation_prompt(record_, statement, verdict, supporting);
    req.n = cfg_.branching;
    req.max_tokens = cfg_.explanation_max_tokens;
    req.temperature = cfg_.explanation_temperature;
    req.top_p = cfg_.explanation_top_p;
    req.stop = {"\n"};
    const auto result = provider_.complete(req);
    std::vector<std::string> out;
    for (const auto& c : result.choices) {
      auto t = text::first_paragraph(c.text);
      if (t.empty()) t = "(no explanation)";
      out.push_back(std::move(t));
    }
    return out;
  }

  const providers::CompletionProvider& provider_;
  const ThoughtRecord& record_;
  const RationalityConfig& cfg_;
  std::mutex memo_mutex_;
  std::map<std::string, std::pair<double, double>> memo_;
};

}  // namespace

std::size_t ReasoningNode::node_count() const noexcept
{
  std::size_t n = 1;
  for (const auto& c : supporting) n += c.node_count();
  for (const auto& c : refuting) n += c.node_count();
  return n;
}

void RationalityConfig::validate() const
{
  if (max_depth < 1) throw Error(ErrorCode::InvalidInput, "max_depth must be >= 1");
  if (branching < 1) throw Error(ErrorCode::InvalidInput, "branching must be >= 1");
  if (parallelism < 1) throw Error(ErrorCode::InvalidInput, "parallelism must be >= 1");
  if (sound_word.empty() || flawed_word.empty() || sound_word == flawed_word) {
    throw Error(ErrorCode::InvalidInput, "option words must be distinct and nonempty");
  }
}

std::string render_soundness_prompt(const ThoughtRecord& record, std::string_view statement)
{
  static const auto tpl = PromptTemplate::from_asset("templates/soundness.v1.txt");
  return tpl.render(TemplateScope{}
                        .set("situation", record.situation())
                        .set("thought", record.thought())
                        .set("statement", std::string(statement)));
}

std::string render_explanation_prompt(const ThoughtRecord& record, std::string_view statement,
                                      std::string_view verdict, bool supporting)
{
  static const auto tpl = PromptTemplate::from_asset("templates/explain.v1.txt");
  TemplateScope scope;
  scope.set("situation", record.situation())
      .set("thought", record.thought())
      .set("statement", std::string(statement))
      .set("verdict", std::string(verdict));
  scope.sections["demonstrations"] = demonstrations(supporting ? "sound" : "flawed");
  return tpl.render(scope);
}

RationalityResult rationality(const providers::CompletionProvider& provider, const ThoughtRecord& record,
                              std::string_view reframe, const RationalityConfig& cfg)
{
  cfg.validate();
  if (text::trim(reframe).empty()) throw Error(ErrorCode::InvalidInput, "rationality needs a nonempty reframe");
  std::optional<providers::ConcurrencyLimitedCompletionProvider> limited;
  const providers::CompletionProvider* p = &provider;
  if (cfg.parallelism > 1) {
    limited.emplace(provider, cfg.parallelism);
    p = &*limited;
  }
  TreeBuilder builder(*p, record, cfg);
  auto tree = builder.expand(std::string(reframe), 0);
  check_tree_bounds(tree);
  return {tree.rs, std::move(tree)};
}

double reasoning_strength(const ReasoningNode& node)
{
  if (node.is_leaf()) return node.p_sound - node.p_flawed;
  double sup = 0.0;
  for (const auto& c : node.supporting) sup += reasoning_strength(c);
  double ref = 0.0;
  for (const auto& c : node.refuting) ref += reasoning_strength(c);
  return node.p_sound * (sup / static_cast<double>(node.supporting.size())) -
         node.p_flawed * (ref / static_cast<double>(node.refuting.size()));
}

void check_tree_bounds(const ReasoningNode& node)
{
  if (!(node.rs >= -1.0 && node.rs <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "reasoning strength " + std::to_string(node.rs) + " outside [-1, 1]");
  }
  if (std::abs(node.p_sound + node.p_flawed - 1.0) > 1e-12) {
    throw Error(ErrorCode::OutOfRange, "soundness probabilities do not sum to 1");
  }
  for (const auto& c : node.supporting) check_tree_bounds(c);
  for (const auto& c : node.refuting) check_tree_bounds(c);
}

}  // namespace reframe::metrics
