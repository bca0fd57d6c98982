#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reframe/core/attributes.hpp"
#include "reframe/experiment/events.hpp"
#include "reframe/stats/bootstrap.hpp"
#include "reframe/stats/tests.hpp"

namespace reframe::experiment {

struct ReportOptions {
  long resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

struct VariantShare {
  std::string variant;  // server label, e.g. "high:empathy"
  std::string level;    // L/M/H or N/Y
  long selected = 0;
  stats::IntervalEstimate share;
};

struct ShareComparison {
  std::string first;
  std::string second;
  /// Test for shares of the same trials (the primary p-value).
  stats::ZTest paired;
  /// Pooled two-proportion test, treating the shares as independent groups.
  stats::ZTest pooled;
  bool extreme = false;  // H vs L, or Y vs N
};

struct AttributePreference {
  AttributeKind attribute = AttributeKind::Empathy;
  long trials = 0;
  std::vector<VariantShare> shares;
  std::vector<ShareComparison> comparisons;
};

struct PreferenceReport {
  long complete_trials = 0;
  long incomplete_trials = 0;
  std::vector<AttributePreference> attributes;
};

/// Throws Error(NoCompleteTrials).
PreferenceReport preference_report(const std::vector<ExperimentEvent>& events, const ReportOptions& options = {});

struct GroupComparison {
  std::string dimension;
  long n_low = 0;
  long n_high = 0;
  stats::IntervalEstimate low;   // Q1, or not addressed
  stats::IntervalEstimate high;  // Q4, or addressed
  stats::IntervalEstimate difference;  // high - low
  stats::TTest welch;
  stats::MannWhitney mann_whitney;
};

struct AttributeOutcome {
  AttributeKind attribute = AttributeKind::Empathy;
  long scored_trials = 0;
  /// Nearest-rank quartile boundaries; absent for trap addressing.
  std::optional<double> p25;
  std::optional<double> p75;
  /// Set when this attribute could not be analysed (e.g. constant scores).
  std::optional<std::string> error;
  std::vector<GroupComparison> dimensions;
};

struct OutcomeReport {
  long complete_trials = 0;
  long incomplete_trials = 0;
  std::vector<AttributeOutcome> attributes;
};

/// Throws Error(InsufficientData) with fewer than 8 complete trials.
OutcomeReport outcome_report(const std::vector<ExperimentEvent>& events, const ReportOptions& options = {});

/// Nearest-rank percentile of sorted values, pct in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double pct);

nlohmann::json to_json(const PreferenceReport& r);
nlohmann::json to_json(const OutcomeReport& r);
std::string to_csv(const PreferenceReport& r);
std::string to_csv(const OutcomeReport& r);

enum class SessionPhase { Consented, ThoughtEntered, TrapsShown, ReframesShown, Selected, Rated, Closed };

std::string_view to_string(SessionPhase p) noexcept;

/// Final phase of every session reconstructed from its events.
std::map<std::string, SessionPhase> replay_phases(const std::vector<ExperimentEvent>& events);

}  // namespace reframe::experiment
