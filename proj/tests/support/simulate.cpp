#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "reframe/core/random.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/core/types.hpp"

namespace sim {

using namespace reframe;
using experiment::EventKind;

experiment::EventLog::Clock ticking_clock()
{
  auto t = std::make_shared<std::int64_t>(1700000000000);
  return [t] { return (*t)++; };
}

void preference_trials(experiment::EventLog& log, AttributeKind attribute, const std::array<double, 3>& probs, int n,
                       std::uint64_t seed, const std::string& session_prefix)
{
  Rng rng(seed);
  const bool traps = attribute == AttributeKind::AddressesTraps;
  const std::vector<Variant> variants =
      traps ? std::vector<Variant>{Variant::trap_not_addressed(), Variant::trap_addressed()}
            : std::vector<Variant>{Variant::low(attribute), Variant::base(), Variant::high(attribute)};
  const auto key = std::string(attribute_key(attribute));
  for (int t = 0; t < n; ++t) {
    const auto id = session_prefix + std::to_string(t);
    const auto order = rng.permutation(variants.size());
    log.append(id, EventKind::SessionStarted, {{"mode", "preference"}, {"attribute", key}, {"display_order", order}});
    nlohmann::json cands = nlohmann::json::array();
    for (std::size_t i = 0; i < variants.size(); ++i) {
      cands.push_back({{"candidate_id", "c" + std::to_string(i)}, {"variant", variant_label(variants[i])}, {"text", "r" + std::to_string(i)}});
    }
    log.append(id, EventKind::ReframesShown, {{"mode", "preference"}, {"attribute", key}, {"candidates", cands}, {"display_order", order}});
    double u = rng.uniform01();
    std::size_t pick = variants.size() - 1;
    for (std::size_t i = 0; i < variants.size(); ++i) {
      if (u < probs[i]) {
        pick = i;
        break;
      }
      u -= probs[i];
    }
    const auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), pick) - order.begin());
    log.append(id, EventKind::ReframeSelected, {{"display_index", pos}, {"candidate_id", "c" + std::to_string(pick)}});
  }
}

void outcome_trials(experiment::EventLog& log, int n, const std::set<AttributeKind>& planted, double effect,
                    double noise_sd, std::uint64_t seed, const std::string& session_prefix)
{
  Rng rng(seed);
  struct Range {
    AttributeKind a;
    double lo, hi;
  };
  const std::array<Range, 6> ranges{{{AttributeKind::Rationality, -1.0, 1.0},
                                     {AttributeKind::Positivity, 0.0, 1.0},
                                     {AttributeKind::Empathy, 0.0, 6.0},
                                     {AttributeKind::Actionability, 0.0, 2.0},
                                     {AttributeKind::Specificity, -1.0, 1.0},
                                     {AttributeKind::Readability, -5.0, 15.0}}};
  for (int t = 0; t < n; ++t) {
    const auto id = session_prefix + std::to_string(t);
    AttributeVector v;
    int above = 0;
    for (const auto& r : ranges) {
      const double s = rng.uniform(r.lo, r.hi);
      if (planted.count(r.a) != 0 && s > (r.lo + r.hi) / 2.0) ++above;
      switch (r.a) {
        case AttributeKind::Rationality: v.set_rationality(s); break;
        case AttributeKind::Positivity: v.set_positivity(s); break;
        case AttributeKind::Empathy: v.set_empathy(s); break;
        case AttributeKind::Actionability: v.set_actionability(s); break;
        case AttributeKind::Specificity: v.set_specificity(s); break;
        default: v.set_readability(s); break;
      }
    }
    const bool addressed = rng.bernoulli(0.5);
    if (planted.count(AttributeKind::AddressesTraps) != 0 && addressed) ++above;
    v.set_traps_addressed(addressed ? TrapSet{ThinkingTrap::FortuneTelling} : TrapSet{});

    log.append(id, EventKind::SessionStarted, {{"mode", "outcome"}, {"display_order", nlohmann::json::array({0})}});
    nlohmann::json cand{{"candidate_id", "c0"}, {"variant", "base"}, {"text", "r"}, {"attributes", to_json(v)}};
    log.append(id, EventKind::ReframesShown, {{"mode", "outcome"}, {"candidates", nlohmann::json::array({cand})}, {"display_order", nlohmann::json::array({0})}});
    nlohmann::json ratings = nlohmann::json::object();
    for (const auto dim : experiment::kOutcomeDimensions) {
      const double raw = 3.0 + effect * above + noise_sd * rng.normal();
      ratings[std::string(dim)] = static_cast<int>(std::clamp(std::lround(raw), 1L, 5L));
    }
    log.append(id, EventKind::OutcomeRated, ratings);
  }
}

}  // namespace sim
