#include "reframe/experiment/reports.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "reframe/core/error.hpp"
#include "reframe/core/random.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/core/types.hpp"
#include "reframe/experiment/condition.hpp"

namespace reframe::experiment {

namespace {

struct Trial {
  std::optional<StudyMode> mode;
  std::optional<AttributeKind> attribute;
  std::vector<std::string> variants;  // by candidate index
  std::vector<std::size_t> display_order;
  std::optional<AttributeVector> scores;  // first candidate, outcome mode
  std::optional<std::string> selected_variant;
  std::optional<std::array<double, 3>> ratings;
  bool shown = false;
};

std::map<std::string, Trial> collect_trials(const std::vector<ExperimentEvent>& events)
{
  std::map<std::string, Trial> trials;
  for (const auto& e : events) {
    auto& t = trials[e.session_id];
    switch (e.kind) {
      case EventKind::SessionStarted:
        t.mode = parse_study_mode(e.payload.at("mode").get<std::string>());
        if (e.payload.contains("attribute") && !e.payload["attribute"].is_null()) {
          t.attribute = parse_attribute(e.payload["attribute"].get<std::string>());
        }
        break;
      case EventKind::ReframesShown:
        if (t.shown) break;
        t.shown = true;
        for (const auto& c : e.payload.at("candidates")) t.variants.push_back(c.at("variant").get<std::string>());
        t.display_order = e.payload.at("display_order").get<std::vector<std::size_t>>();
        if (e.payload["candidates"][0].contains("attributes")) {
          t.scores = attribute_vector_from_json(e.payload["candidates"][0]["attributes"]);
        }
        break;
      case EventKind::ReframeSelected: {
        if (t.selected_variant || !t.shown) break;
        const auto pos = e.payload.at("display_index").get<std::size_t>();
        if (pos < t.display_order.size()) t.selected_variant = t.variants.at(t.display_order[pos]);
        break;
      }
      case EventKind::OutcomeRated:
        if (t.ratings) break;
        t.ratings = std::array<double, 3>{};
        for (std::size_t d = 0; d < kOutcomeDimensions.size(); ++d) {
          (*t.ratings)[d] = e.payload.at(std::string(kOutcomeDimensions[d])).get<double>();
        }
        break;
      default:
        break;
    }
  }
  return trials;
}

struct Level {
  std::string variant;
  std::string level;
};

std::vector<Level> levels_for(AttributeKind a)
{
  if (a == AttributeKind::AddressesTraps) {
    return {{variant_label(Variant::trap_not_addressed()), "N"}, {variant_label(Variant::trap_addressed()), "Y"}};
  }
  return {{variant_label(Variant::low(a)), "L"}, {variant_label(Variant::base()), "M"}, {variant_label(Variant::high(a)), "H"}};
}

std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag)
{
  return fnv1a64(tag, seed ^ 0x9e3779b97f4a7c15ULL);
}

stats::IntervalEstimate interval(const std::vector<double>& samples, stats::Statistic statistic,
                                 const ReportOptions& o, std::string_view tag)
{
  if (samples.size() < 2) {
    const double point = samples.empty() ? 0.0 : samples.front();
    return {point, point, point, o.level, 0};
  }
  return stats::bootstrap_ci(samples, statistic, o.resamples, o.level, sub_seed(o.seed, tag));
}

GroupComparison compare(const std::string& dimension, const std::vector<double>& low, const std::vector<double>& high,
                        const ReportOptions& o, const std::string& tag)
{
  GroupComparison g;
  g.dimension = dimension;
  g.n_low = static_cast<long>(low.size());
  g.n_high = static_cast<long>(high.size());
  g.low = interval(low, stats::Statistic::Mean, o, tag + "/low");
  g.high = interval(high, stats::Statistic::Mean, o, tag + "/high");
  g.difference = stats::bootstrap_diff_ci(low, high, o.resamples, o.level, sub_seed(o.seed, tag + "/diff"));
  g.welch = stats::welch_t_test(low, high);
  g.mann_whitney = stats::mann_whitney(low, high);
  return g;
}

nlohmann::json interval_json(const stats::IntervalEstimate& e)
{
  return {{"point", e.point}, {"lo", e.lo}, {"hi", e.hi}, {"level", e.level}, {"resamples", e.resamples}};
}

std::string num(double v)
{
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

}  // namespace

double nearest_rank(const std::vector<double>& sorted, double pct)
{
  if (sorted.empty()) throw Error(ErrorCode::InsufficientData, "percentile of empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

PreferenceReport preference_report(const std::vector<ExperimentEvent>& events, const ReportOptions& options)
{
  const auto trials = collect_trials(events);
  PreferenceReport report;
  std::map<AttributeKind, std::vector<std::string>> picks;
  for (const auto& [id, t] : trials) {
    if (t.mode != StudyMode::Preference || !t.attribute || !t.shown) continue;
    if (!t.selected_variant) {
      ++report.incomplete_trials;
      continue;
    }
    ++report.complete_trials;
    picks[*t.attribute].push_back(*t.selected_variant);
  }
  if (report.complete_trials == 0) throw Error(ErrorCode::NoCompleteTrials, "no completed preference trials");

  for (const auto a : kAllAttributes) {
    const auto it = picks.find(a);
    if (it == picks.end()) continue;
    const auto& chosen = it->second;
    AttributePreference ap;
    ap.attribute = a;
    ap.trials = static_cast<long>(chosen.size());
    const auto levels = levels_for(a);
    for (const auto& lv : levels) {
      std::vector<double> indicator;
      indicator.reserve(chosen.size());
      for (const auto& v : chosen) indicator.push_back(v == lv.variant ? 1.0 : 0.0);
      VariantShare s;
      s.variant = lv.variant;
      s.level = lv.level;
      s.selected = static_cast<long>(std::count(indicator.begin(), indicator.end(), 1.0));
      s.share = interval(indicator, stats::Statistic::Proportion, options, std::string(attribute_key(a)) + "/" + lv.variant);
      ap.shares.push_back(std::move(s));
    }
    // Higher level first: H-L, H-M, M-L (or Y-N).
    for (std::size_t hi = levels.size(); hi-- > 1;) {
      for (std::size_t lo = 0; lo < hi; ++lo) {
        const auto& sh = ap.shares[hi];
        const auto& sl = ap.shares[lo];
        ShareComparison c;
        c.first = sh.level;
        c.second = sl.level;
        c.paired = stats::paired_share_test(sh.selected, sl.selected, ap.trials);
        c.pooled = stats::two_proportion_test(sh.selected, ap.trials, sl.selected, ap.trials);
        c.extreme = hi == levels.size() - 1 && lo == 0;
        ap.comparisons.push_back(c);
      }
    }
    report.attributes.push_back(std::move(ap));
  }
  return report;
}

OutcomeReport outcome_report(const std::vector<ExperimentEvent>& events, const ReportOptions& options)
{
  const auto trials = collect_trials(events);
  OutcomeReport report;
  std::vector<const Trial*> complete;
  for (const auto& [id, t] : trials) {
    if (t.mode != StudyMode::Outcome || !t.shown) continue;
    if (t.scores && t.ratings) {
      complete.push_back(&t);
      ++report.complete_trials;
    }
    else {
      ++report.incomplete_trials;
    }
  }
  if (complete.size() < 8) {
    throw Error(ErrorCode::InsufficientData,
                "outcome analysis needs at least 8 complete trials, have " + std::to_string(complete.size()));
  }

  for (const auto a : kAllAttributes) {
    AttributeOutcome ao;
    ao.attribute = a;
    const auto tag = std::string(attribute_key(a));
    std::vector<const Trial*> low, high;
    if (a == AttributeKind::AddressesTraps) {
      for (const auto* t : complete) {
        const auto& traps = t->scores->traps_addressed();
        if (!traps) continue;
        ++ao.scored_trials;
        (traps->empty() ? low : high).push_back(t);
      }
      if (low.size() < 2 || high.size() < 2) ao.error = "need two trials both with and without addressed traps";
    }
    else {
      std::vector<double> scores;
      for (const auto* t : complete) {
        if (const auto v = t->scores->scalar(a)) scores.push_back(*v);
      }
      ao.scored_trials = static_cast<long>(scores.size());
      if (scores.size() < 8) {
        ao.error = "fewer than 8 scored trials";
      }
      else {
        std::sort(scores.begin(), scores.end());
        ao.p25 = nearest_rank(scores, 25.0);
        ao.p75 = nearest_rank(scores, 75.0);
        if (*ao.p25 >= *ao.p75) {
          ao.error = "degenerate quartiles: scores do not spread between the 25th and 75th percentiles";
        }
        else {
          for (const auto* t : complete) {
            const auto v = t->scores->scalar(a);
            if (!v) continue;
            if (*v <= *ao.p25) low.push_back(t);
            if (*v >= *ao.p75) high.push_back(t);
          }
        }
      }
    }
    if (!ao.error) {
      for (std::size_t d = 0; d < kOutcomeDimensions.size(); ++d) {
        std::vector<double> lo, hi;
        for (const auto* t : low) lo.push_back((*t->ratings)[d]);
        for (const auto* t : high) hi.push_back((*t->ratings)[d]);
        const auto dim = std::string(kOutcomeDimensions[d]);
        ao.dimensions.push_back(compare(dim, lo, hi, options, tag + "/" + dim));
      }
    }
    report.attributes.push_back(std::move(ao));
  }
  return report;
}

nlohmann::json to_json(const PreferenceReport& r)
{
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : r.attributes) {
    nlohmann::json shares = nlohmann::json::array();
    for (const auto& s : a.shares) {
      shares.push_back({{"variant", s.variant}, {"level", s.level}, {"selected", s.selected}, {"share", interval_json(s.share)}});
    }
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : a.comparisons) {
      comps.push_back({{"first", c.first},
                       {"second", c.second},
                       {"extreme", c.extreme},
                       {"z", c.paired.z},
                       {"p", c.paired.p},
                       {"pooled_z", c.pooled.z},
                       {"pooled_p", c.pooled.p}});
    }
    attrs.push_back({{"attribute", attribute_key(a.attribute)}, {"trials", a.trials}, {"shares", shares}, {"comparisons", comps}});
  }
  return {{"report", "preference"},
          {"complete_trials", r.complete_trials},
          {"incomplete_trials", r.incomplete_trials},
          {"attributes", attrs}};
}

nlohmann::json to_json(const OutcomeReport& r)
{
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : r.attributes) {
    nlohmann::json j{{"attribute", attribute_key(a.attribute)}, {"scored_trials", a.scored_trials}};
    if (a.p25) j["p25"] = *a.p25;
    if (a.p75) j["p75"] = *a.p75;
    if (a.error) j["error"] = *a.error;
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& g : a.dimensions) {
      dims.push_back({{"dimension", g.dimension},
                      {"n_low", g.n_low},
                      {"n_high", g.n_high},
                      {"low", interval_json(g.low)},
                      {"high", interval_json(g.high)},
                      {"difference", interval_json(g.difference)},
                      {"welch", {{"t", g.welch.t}, {"df", g.welch.df}, {"p", g.welch.p}}},
                      {"mann_whitney", {{"u", g.mann_whitney.u}, {"z", g.mann_whitney.z}, {"p", g.mann_whitney.p}}}});
    }
    j["dimensions"] = dims;
    attrs.push_back(std::move(j));
  }
  return {{"report", "outcome"},
          {"complete_trials", r.complete_trials},
          {"incomplete_trials", r.incomplete_trials},
          {"attributes", attrs}};
}

std::string to_csv(const PreferenceReport& r)
{
  std::ostringstream out;
  out << "attribute,variant,level,selected,trials,share,lo,hi\n";
  for (const auto& a : r.attributes) {
    for (const auto& s : a.shares) {
      out << attribute_key(a.attribute) << ',' << s.variant << ',' << s.level << ',' << s.selected << ',' << a.trials
          << ',' << num(s.share.point) << ',' << num(s.share.lo) << ',' << num(s.share.hi) << '\n';
    }
  }
  out << "\nattribute,first,second,z,p,pooled_z,pooled_p\n";
  for (const auto& a : r.attributes) {
    for (const auto& c : a.comparisons) {
      out << attribute_key(a.attribute) << ',' << c.first << ',' << c.second << ',' << num(c.paired.z) << ','
          << num(c.paired.p) << ',' << num(c.pooled.z) << ',' << num(c.pooled.p) << '\n';
    }
  }
  return out.str();
}

std::string to_csv(const OutcomeReport& r)
{
  std::ostringstream out;
  out << "attribute,dimension,n_low,n_high,mean_low,lo_low,hi_low,mean_high,lo_high,hi_high,diff,diff_lo,diff_hi,"
         "welch_t,welch_p,mw_u,mw_p,error\n";
  for (const auto& a : r.attributes) {
    if (a.error) {
      out << attribute_key(a.attribute) << ",,,,,,,,,,,,,,,,,\"" << *a.error << "\"\n";
      continue;
    }
    for (const auto& g : a.dimensions) {
      out << attribute_key(a.attribute) << ',' << g.dimension << ',' << g.n_low << ',' << g.n_high << ','
          << num(g.low.point) << ',' << num(g.low.lo) << ',' << num(g.low.hi) << ',' << num(g.high.point) << ','
          << num(g.high.lo) << ',' << num(g.high.hi) << ',' << num(g.difference.point) << ','
          << num(g.difference.lo) << ',' << num(g.difference.hi) << ',' << num(g.welch.t) << ',' << num(g.welch.p)
          << ',' << num(g.mann_whitney.u) << ',' << num(g.mann_whitney.p) << ",\n";
    }
  }
  return out.str();
}

std::string_view to_string(SessionPhase p) noexcept
{
  switch (p) {
    case SessionPhase::Consented: return "consented";
    case SessionPhase::ThoughtEntered: return "thought_entered";
    case SessionPhase::TrapsShown: return "traps_shown";
    case SessionPhase::ReframesShown: return "reframes_shown";
    case SessionPhase::Selected: return "selected";
    case SessionPhase::Rated: return "rated";
    case SessionPhase::Closed: return "closed";
  }
  return "?";
}

std::map<std::string, SessionPhase> replay_phases(const std::vector<ExperimentEvent>& events)
{
  std::map<std::string, SessionPhase> out;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::SessionStarted: out[e.session_id] = SessionPhase::Consented; break;
      case EventKind::ThoughtSubmitted: out[e.session_id] = SessionPhase::TrapsShown; break;
      case EventKind::ReframesShown: out[e.session_id] = SessionPhase::ReframesShown; break;
      case EventKind::ReframeSelected: out[e.session_id] = SessionPhase::Selected; break;
      case EventKind::OutcomeRated: out[e.session_id] = SessionPhase::Rated; break;
      default: break;
    }
  }
  return out;
}

}  // namespace reframe::experiment
