#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "expect.hpp"
#include "fixtures.hpp"
#include "reframe/core/log.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/experiment/condition.hpp"
#include "reframe/experiment/events.hpp"
#include "reframe/experiment/reports.hpp"
#include "reframe/stats/tests.hpp"
#include "simulate.hpp"

using namespace reframe;
using namespace reframe::experiment;
namespace fs = std::filesystem;

namespace {

fs::path temp_log(const std::string& name)
{
  const auto p = fs::temp_directory_path() / ("reframe_events_" + std::to_string(::getpid()) + "_" + name);
  fs::remove(p);
  return p;
}

nlohmann::json shown_payload(std::size_t n)
{
  nlohmann::json cands = nlohmann::json::array();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    cands.push_back({{"candidate_id", "c" + std::to_string(i)}, {"variant", i == 0 ? "base" : "high:empathy"}, {"text", "t"}});
    order.push_back(i);
  }
  return {{"mode", "preference"}, {"attribute", "empathy"}, {"candidates", cands}, {"display_order", order}};
}

nlohmann::json started()
{
  return {{"mode", "preference"}, {"attribute", "empathy"}, {"display_order", {1, 0, 2}}};
}

const nlohmann::json kRatings{{"relatability", 5}, {"helpfulness", 4}, {"memorability", 4}};

struct QuietLog {
  std::vector<std::string> warnings;
  log::Sink previous;
  QuietLog()
  {
    previous = log::set_sink([this](std::string_view level, std::string_view m) {
      if (level == "warn") warnings.emplace_back(m);
    });
  }
  ~QuietLog() { log::set_sink(previous); }
};

}  // namespace

TEST_CASE("attribute assignment is uniform over 70,000 draws")
{
  Rng stream(20230601);
  AssignmentConfig all_preference{1.0};
  std::vector<long> counts(kAllAttributes.size(), 0);
  for (int i = 0; i < 70000; ++i) {
    const auto c = assign_condition(stream, all_preference);
    REQUIRE(c.attribute.has_value());
    ++counts[static_cast<std::size_t>(*c.attribute)];
  }
  for (const long n : counts) CHECK(std::abs(static_cast<double>(n) / 70000.0 - 1.0 / 7.0) <= 0.01);
  CHECK(stats::chi_square_uniform(counts).p > 0.01);
}

TEST_CASE("assignment is reproducible and well formed")
{
  Rng a(5), b(5);
  for (int i = 0; i < 200; ++i) {
    const auto ca = assign_condition(a);
    const auto cb = assign_condition(b);
    CHECK(ca.mode == cb.mode);
    CHECK(ca.attribute == cb.attribute);
    CHECK(ca.display_order == cb.display_order);
    CHECK_NOTHROW(ca.validate());
    if (ca.mode == StudyMode::Outcome) {
      CHECK(!ca.attribute.has_value());
      CHECK(ca.display_order == std::vector<std::size_t>{0});
    }
    else {
      CHECK(ca.display_order.size() == candidate_count(ca.mode, ca.attribute));
    }
  }
  const auto s1 = assign_condition("session-abc", 77);
  const auto s2 = assign_condition("session-abc", 77);
  CHECK(s1.display_order == s2.display_order);
  CHECK(s1.attribute == s2.attribute);

  long preference = 0;
  for (int i = 0; i < 4000; ++i) preference += assign_condition("s" + std::to_string(i), 1).mode == StudyMode::Preference;
  CHECK(std::abs(preference / 4000.0 - 0.5) < 0.03);
}

TEST_CASE("condition invariants")
{
  ExperimentCondition bad{StudyMode::Preference, AttributeKind::Empathy, {0, 0, 1}};
  CHECK(expect::error_code([&] { bad.validate(); }) == ErrorCode::InvalidInput);
  bad.display_order = {0, 1};
  CHECK(expect::error_code([&] { bad.validate(); }) == ErrorCode::InvalidInput);
  ExperimentCondition outcome{StudyMode::Outcome, AttributeKind::Empathy, {0}};
  CHECK(expect::error_code([&] { outcome.validate(); }) == ErrorCode::InvalidInput);
  ExperimentCondition traps{StudyMode::Preference, AttributeKind::AddressesTraps, {1, 0}};
  CHECK_NOTHROW(traps.validate());
}

TEST_CASE("event validation")
{
  EventLog log(sim::ticking_clock());
  CHECK(expect::error_code([&] { log.append("s", EventKind::ReframesShown, shown_payload(3)); }) ==
        ErrorCode::InvalidEvent);
  log.append("s", EventKind::SessionStarted, started());
  CHECK(expect::error_code([&] { log.append("s", EventKind::ReframeSelected, {{"display_index", std::size_t{0}}}); }) ==
        ErrorCode::InvalidEvent);
  log.append("s", EventKind::ReframesShown, shown_payload(3));
  CHECK(expect::error_code([&] { log.append("s", EventKind::ReframeSelected, {{"display_index", 3}}); }) ==
        ErrorCode::InvalidEvent);
  auto six = kRatings;
  six["helpfulness"] = 6;
  CHECK(expect::error_code([&] { log.append("s", EventKind::OutcomeRated, six); }) == ErrorCode::InvalidEvent);
  auto text = kRatings;
  text["memorability"] = "4";
  CHECK(expect::error_code([&] { log.append("s", EventKind::OutcomeRated, text); }) == ErrorCode::InvalidEvent);
  auto missing = kRatings;
  missing.erase("relatability");
  CHECK(expect::error_code([&] { log.append("s", EventKind::OutcomeRated, missing); }) == ErrorCode::InvalidEvent);
  CHECK(log.append("s", EventKind::ReframeSelected, {{"display_index", 2}}) == 3);
  CHECK(log.append("s", EventKind::OutcomeRated, kRatings) == 4);
  CHECK(log.size() == 4);
  auto bad_order = shown_payload(3);
  bad_order["display_order"] = {0, 0, 1};
  CHECK(expect::error_code([&] { validate_payload(EventKind::ReframesShown, bad_order); }) == ErrorCode::InvalidEvent);
}

TEST_CASE("event json round trip")
{
  EventLog log(sim::ticking_clock());
  log.append("s", EventKind::SessionStarted, started());
  const auto e = log.events().front();
  CHECK(event_from_json(to_json(e)) == e);
  CHECK(to_json(e).at("kind") == "session_started");
  for (const auto k : {EventKind::SessionStarted, EventKind::ThoughtSubmitted, EventKind::TrapsDetected,
                       EventKind::TrapsSelected, EventKind::ReframesShown, EventKind::ReframeSelected,
                       EventKind::OutcomeRated, EventKind::ReframeFlagged}) {
    CHECK(parse_event_kind(to_string(k)) == k);
  }
}

TEST_CASE("concurrent appends get distinct consecutive seqs and are durable")
{
  const auto path = temp_log("concurrent.jsonl");
  {
    EventLog log(path);
    std::vector<std::thread> threads;
    std::vector<std::vector<std::uint64_t>> seqs(8);
    for (std::size_t t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 50; ++i) {
          seqs[t].push_back(log.append("t" + std::to_string(t) + "-" + std::to_string(i), EventKind::SessionStarted,
                                       {{"mode", "outcome"}, {"display_order", nlohmann::json::array({0})}}));
        }
      });
    }
    for (auto& th : threads) th.join();
    std::set<std::uint64_t> all;
    for (const auto& s : seqs) {
      all.insert(s.begin(), s.end());
      CHECK(std::is_sorted(s.begin(), s.end()));
    }
    CHECK(all.size() == 400);
    CHECK(*all.begin() == 1);
    CHECK(*all.rbegin() == 400);
  }
  const auto back = read_event_log(path);
  REQUIRE(back.size() == 400);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i].seq == i + 1);
  fs::remove(path);
}

TEST_CASE("a torn final line is dropped on reopen")
{
  QuietLog quiet;
  const auto path = temp_log("torn.jsonl");
  {
    EventLog log(path);
    log.append("a", EventKind::SessionStarted, started());
    log.append("a", EventKind::ReframesShown, shown_payload(3));
  }
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << R"({"seq":3,"session_id":"a","timestamp":1,"kind":"reframe_sel)";
  }
  CHECK(read_event_log(path).size() == 2);
  CHECK(quiet.warnings.size() == 1);
  {
    EventLog log(path);
    CHECK(log.size() == 2);
    CHECK(log.append("a", EventKind::ReframeSelected, {{"display_index", 1}}) == 3);
  }
  const auto back = read_event_log(path);
  REQUIRE(back.size() == 3);
  CHECK(back[2].kind == EventKind::ReframeSelected);
  const auto bytes = fixtures::read_text(path);
  CHECK(bytes.find("reframe_sel\"") == std::string::npos);
  CHECK(bytes.back() == '\n');
  fs::remove(path);
}

TEST_CASE("log parsing errors")
{
  CHECK(expect::error_code([] { parse_event_log("{\"seq\":1}\n"); }) == ErrorCode::ParseError);
  const std::string header = "{\"schema\":\"events/v1\"}\n";
  CHECK(parse_event_log(header).empty());
  CHECK(parse_event_log("").empty());
  CHECK(expect::error_code([&] { parse_event_log(header + "not json\n{}\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("preference report basics")
{
  SUBCASE("single trial selecting H")
  {
    EventLog log(sim::ticking_clock());
    sim::preference_trials(log, AttributeKind::Empathy, {0.0, 0.0, 1.0}, 1, 3);
    const auto r = preference_report(log.events(), {1000, 0.95, 1});
    REQUIRE(r.attributes.size() == 1);
    const auto& a = r.attributes[0];
    CHECK(a.trials == 1);
    for (const auto& s : a.shares) {
      const double want = s.level == "H" ? 1.0 : 0.0;
      CHECK(s.share.point == want);
      CHECK(s.share.lo == want);
      CHECK(s.share.hi == want);
    }
  }
  SUBCASE("shares sum to one and incomplete trials are counted")
  {
    EventLog log(sim::ticking_clock());
    sim::preference_trials(log, AttributeKind::Positivity, {0.2, 0.3, 0.5}, 300, 4);
    sim::preference_trials(log, AttributeKind::AddressesTraps, {0.4, 0.6, 0.0}, 200, 5, "t");
    log.append("x", EventKind::SessionStarted, started());
    log.append("x", EventKind::ReframesShown, shown_payload(3));
    const auto r = preference_report(log.events(), {500, 0.95, 2});
    CHECK(r.complete_trials == 500);
    CHECK(r.incomplete_trials == 1);
    for (const auto& a : r.attributes) {
      double sum = 0.0;
      for (const auto& s : a.shares) sum += s.share.point;
      CHECK(std::abs(sum - 1.0) < 1e-9);
      if (a.attribute == AttributeKind::AddressesTraps) {
        CHECK(a.shares.size() == 2);
        CHECK(a.comparisons.size() == 1);
        CHECK(a.comparisons[0].extreme);
      }
      else {
        CHECK(a.shares.size() == 3);
        CHECK(a.comparisons.size() == 3);
      }
    }
  }
  SUBCASE("no complete trials")
  {
    EventLog log(sim::ticking_clock());
    log.append("x", EventKind::SessionStarted, started());
    CHECK(expect::error_code([&] { preference_report(log.events()); }) == ErrorCode::NoCompleteTrials);
  }
}

TEST_CASE("outcome report basics")
{
  SUBCASE("fewer than eight trials")
  {
    EventLog log(sim::ticking_clock());
    sim::outcome_trials(log, 7, {}, 0.0, 1.0, 1);
    CHECK(expect::error_code([&] { outcome_report(log.events()); }) == ErrorCode::InsufficientData);
  }
  SUBCASE("quartiles and planted effect")
  {
    EventLog log(sim::ticking_clock());
    sim::outcome_trials(log, 400, {AttributeKind::Empathy}, 1.0, 0.8, 2);
    const auto r = outcome_report(log.events(), {500, 0.95, 3});
    CHECK(r.complete_trials == 400);
    REQUIRE(r.attributes.size() == 7);
    for (const auto& a : r.attributes) {
      CHECK(!a.error.has_value());
      REQUIRE(a.dimensions.size() == 3);
      if (a.attribute != AttributeKind::AddressesTraps) {
        CHECK(a.dimensions[0].n_low == doctest::Approx(100).epsilon(0.05));
        CHECK(a.dimensions[0].n_high == doctest::Approx(100).epsilon(0.05));
      }
      if (a.attribute == AttributeKind::Empathy) {
        for (const auto& d : a.dimensions) {
          CHECK(d.high.point > d.low.point);
          CHECK(d.welch.p < 0.01);
          CHECK(d.difference.lo > 0.0);
        }
      }
    }
  }
  SUBCASE("constant scores degrade one attribute only")
  {
    EventLog log(sim::ticking_clock());
    for (int i = 0; i < 20; ++i) {
      const auto id = "c" + std::to_string(i);
      AttributeVector v;
      v.set_traps_addressed(i % 2 ? TrapSet{ThinkingTrap::Blaming} : TrapSet{})
          .set_rationality(0.1 * (i % 7))
          .set_positivity(0.5)
          .set_empathy(i % 6)
          .set_actionability(0.1 * i)
          .set_specificity(-0.5 + 0.05 * i)
          .set_readability(i);
      log.append(id, EventKind::SessionStarted, {{"mode", "outcome"}, {"display_order", nlohmann::json::array({0})}});
      log.append(id, EventKind::ReframesShown,
                 {{"mode", "outcome"},
                  {"candidates", {{{"candidate_id", "c"}, {"variant", "base"}, {"text", "t"}, {"attributes", reframe::to_json(v)}}}},
                  {"display_order", nlohmann::json::array({0})}});
      log.append(id, EventKind::OutcomeRated,
                 {{"relatability", 1 + i % 5}, {"helpfulness", 1 + i % 4}, {"memorability", 1 + i % 3}});
    }
    const auto r = outcome_report(log.events(), {200, 0.95, 3});
    for (const auto& a : r.attributes) {
      if (a.attribute == AttributeKind::Positivity) {
        CHECK(a.error.has_value());
        CHECK(a.dimensions.empty());
      }
      else {
        CHECK(!a.error.has_value());
      }
    }
  }
}

TEST_CASE("nearest rank percentiles")
{
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(nearest_rank(v, 25) == 2);
  CHECK(nearest_rank(v, 75) == 6);
  CHECK(nearest_rank(v, 100) == 8);
  CHECK(nearest_rank({42}, 25) == 42);
}

TEST_CASE("replaying a log gives byte-identical reports")
{
  const auto path = temp_log("replay.jsonl");
  {
    EventLog log(path, sim::ticking_clock());
    sim::preference_trials(log, AttributeKind::Readability, {0.3, 0.3, 0.4}, 100, 8);
    sim::outcome_trials(log, 60, {AttributeKind::Actionability}, 1.0, 1.0, 9);
  }
  const auto bytes = fixtures::read_text(path);
  auto render = [&](const std::string& b) {
    const auto events = parse_event_log(b);
    const ReportOptions o{400, 0.95, 6};
    return to_json(preference_report(events, o)).dump() + to_csv(preference_report(events, o)) +
           to_json(outcome_report(events, o)).dump() + to_csv(outcome_report(events, o));
  };
  const auto first = render(bytes);
  CHECK(first == render(bytes));
  CHECK(serialize_event_log(parse_event_log(bytes)) == bytes);
  CHECK(to_csv(preference_report(parse_event_log(bytes), {400, 0.95, 6})).rfind("attribute,", 0) == 0);
  fs::remove(path);
}

TEST_CASE("replaying phases")
{
  EventLog log(sim::ticking_clock());
  log.append("a", EventKind::SessionStarted, started());
  log.append("b", EventKind::SessionStarted, started());
  log.append("b", EventKind::ThoughtSubmitted, {{"detected_traps", nlohmann::json::array()}, {"crisis_banner", false}});
  log.append("b", EventKind::ReframesShown, shown_payload(3));
  log.append("b", EventKind::ReframeSelected, {{"display_index", std::size_t{0}}});
  const auto phases = replay_phases(log.events());
  CHECK(phases.at("a") == SessionPhase::Consented);
  CHECK(phases.at("b") == SessionPhase::Selected);
}
