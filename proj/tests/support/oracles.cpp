#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stack>

#include "reframe/metrics/rationality.hpp"

namespace oracle {

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b)
{
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

std::pair<double, double> renormalized(const TreeSpec& s)
{
  const double floor = 1e-6;
  const double ps = s.logprob_sound ? std::exp(*s.logprob_sound) : floor;
  const double pf = s.logprob_flawed ? std::exp(*s.logprob_flawed) : floor;
  return {ps / (ps + pf), pf / (ps + pf)};
}

}  // namespace

std::vector<Ranked> brute_force_retrieve(const std::vector<std::vector<double>>& situations,
                                         const std::vector<std::vector<double>>& thoughts,
                                         const std::vector<double>& query_situation,
                                         const std::vector<double>& query_thought, std::size_t k)
{
  std::vector<Ranked> all;
  for (std::size_t i = 0; i < situations.size(); ++i) {
    all.push_back({i, cosine(situations[i], query_situation) * cosine(thoughts[i], query_thought)});
  }
  // Ties are scores equal to 12 decimal places; stable sort keeps index order.
  std::stable_sort(all.begin(), all.end(), [](const Ranked& a, const Ranked& b) {
    return std::llround(a.score * 1e12) > std::llround(b.score * 1e12);
  });
  all.resize(std::min(k, all.size()));
  return all;
}

TreeSpec random_tree(reframe::Rng& rng, int levels, int branching, const std::string& prefix)
{
  TreeSpec s;
  s.statement = "statement " + prefix;
  // Mostly both options present; sometimes one falls out of the top tokens.
  const double roll = rng.uniform01();
  const double p = rng.uniform(0.01, 0.99);
  if (roll > 0.1) s.logprob_sound = std::log(p * rng.uniform(0.5, 1.0));
  if (roll < 0.05 || roll > 0.15) s.logprob_flawed = std::log((1.0 - p) * rng.uniform(0.5, 1.0));
  if (levels > 1) {
    for (int i = 0; i < branching; ++i) {
      s.supporting.push_back(random_tree(rng, levels - 1, branching, prefix + ".s" + std::to_string(i)));
    }
    for (int i = 0; i < branching; ++i) {
      s.refuting.push_back(random_tree(rng, levels - 1, branching, prefix + ".r" + std::to_string(i)));
    }
  }
  return s;
}

reframe::providers::ScriptedCompletionProvider provider_for(const TreeSpec& spec, const reframe::ThoughtRecord& record)
{
  using reframe::providers::CompletionChoice;
  reframe::providers::ScriptedCompletionProvider::Builder b;
  std::vector<const TreeSpec*> todo{&spec};
  while (!todo.empty()) {
    const auto* s = todo.back();
    todo.pop_back();
    CompletionChoice verdict{" x", {}};
    if (s->logprob_sound) verdict.token_logprobs.push_back({" Sound", *s->logprob_sound});
    if (s->logprob_flawed) verdict.token_logprobs.push_back({"flawed ", *s->logprob_flawed});
    verdict.token_logprobs.push_back({" maybe", std::log(0.001)});
    b.on_prompt(reframe::metrics::render_soundness_prompt(record, s->statement), {verdict});
    if (!s->supporting.empty()) {
      std::vector<CompletionChoice> sup, ref;
      for (const auto& c : s->supporting) sup.push_back({" " + c.statement, {}});
      for (const auto& c : s->refuting) ref.push_back({" " + c.statement, {}});
      b.on_prompt(reframe::metrics::render_explanation_prompt(record, s->statement, "sound", true), sup);
      b.on_prompt(reframe::metrics::render_explanation_prompt(record, s->statement, "flawed", false), ref);
    }
    for (const auto& c : s->supporting) todo.push_back(&c);
    for (const auto& c : s->refuting) todo.push_back(&c);
  }
  return b.build();
}

double tree_walk_rs(const TreeSpec& spec)
{
  struct Frame {
    const TreeSpec* node;
    bool children_done;
  };
  std::map<const TreeSpec*, double> rs;
  std::stack<Frame> st;
  st.push({&spec, false});
  while (!st.empty()) {
    auto f = st.top();
    st.pop();
    const auto [ps, pf] = renormalized(*f.node);
    if (f.node->supporting.empty()) {
      rs[f.node] = ps - pf;
      continue;
    }
    if (!f.children_done) {
      st.push({f.node, true});
      for (const auto& c : f.node->supporting) st.push({&c, false});
      for (const auto& c : f.node->refuting) st.push({&c, false});
      continue;
    }
    double sup = 0.0;
    for (const auto& c : f.node->supporting) sup += rs.at(&c);
    double ref = 0.0;
    for (const auto& c : f.node->refuting) ref += rs.at(&c);
    rs[f.node] = ps * (sup / static_cast<double>(f.node->supporting.size())) -
                 pf * (ref / static_cast<double>(f.node->refuting.size()));
  }
  return rs.at(&spec);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my) / (n - 1.0);
    vx += (x[i] - mx) * (x[i] - mx) / (n - 1.0);
    vy += (y[i] - my) * (y[i] - my) / (n - 1.0);
  }
  return cov / (std::sqrt(vx) * std::sqrt(vy));
}

double pairwise_cosine_mean(const std::vector<std::vector<double>>& vectors)
{
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      sum += cosine(vectors[i], vectors[j]);
      ++pairs;
    }
  }
  return sum / pairs;
}

}  // namespace oracle
