#include "reframe/service/service.hpp"

#include <random>

#include "reframe/core/assets.hpp"
#include "reframe/core/random.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/core/traps.hpp"

namespace reframe::service {

using experiment::EventKind;
using experiment::StudyMode;

namespace {

bool flag_set(const nlohmann::json& body, const char* key)
{
  return body.is_object() && body.contains(key) && body[key].is_boolean() && body[key].get<bool>();
}

std::string string_field(const nlohmann::json& body, const char* key)
{
  if (!body.is_object() || !body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::InvalidInput, std::string("field '") + key + "' must be a string");
  }
  return body[key].get<std::string>();
}

std::size_t index_field(const nlohmann::json& body, const char* key)
{
  if (!body.is_object() || !body.contains(key) || !(body[key].is_number_unsigned() || (body[key].is_number_integer() && body[key].get<std::int64_t>() >= 0))) {
    throw Error(ErrorCode::InvalidInput, std::string("field '") + key + "' must be a non-negative integer");
  }
  return body[key].get<std::size_t>();
}

/// splitmix64 finalizer. Candidate ids must not reveal generation order,
/// which FNV alone does for inputs differing only in the last byte.
std::uint64_t mix(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

int http_status(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::ConsentRequired:
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidEvent:
    case ErrorCode::UnknownTrap:
    case ErrorCode::UnknownAttribute:
    case ErrorCode::OutOfRange:
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
      return 400;
    case ErrorCode::SessionNotFound: return 404;
    case ErrorCode::PhaseViolation: return 409;
    case ErrorCode::SessionClosed: return 410;
    case ErrorCode::Timeout:
    case ErrorCode::RateLimited:
    case ErrorCode::MalformedResponse:
    case ErrorCode::EndpointUnreachable:
    case ErrorCode::SafetyExhausted:
    case ErrorCode::EmptyCompletion:
    case ErrorCode::DuplicateVariants:
    case ErrorCode::AllMetricsFailed:
    case ErrorCode::FewerThanTwoActions:
      return 502;
    case ErrorCode::StorageFailure: return 503;
    default: return 500;
  }
}

bool retryable(ErrorCode code) noexcept
{
  const int status = http_status(code);
  return status == 502 || status == 503;
}

nlohmann::json error_body(ErrorCode code, std::string_view message)
{
  return {{"code", to_string(code)}, {"message", message}, {"retryable", retryable(code)}};
}

Service::Service(ServiceProviders providers, dataset::DatasetSnapshot examples, generation::SafetyFilter safety,
                 experiment::EventLog& log, ServiceOptions options)
    : providers_(providers), examples_(std::move(examples)), safety_(std::move(safety)), log_(log),
      options_(std::move(options)),
      generator_(examples_, providers_.completion, providers_.embedding, safety_, options_.generator),
      scorer_(providers_.completion, providers_.embedding, providers_.sentiment, providers_.empathy, options_.scoring),
      crisis_resources_(nlohmann::json::parse(assets::get("crisis_resources.json")))
{
  scorer_.set_trap_examples(examples_);
}

std::string Service::fresh_session_id()
{
  if (options_.next_session_id) return options_.next_session_id();
  static thread_local std::random_device rd;
  std::uint64_t a = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::uint64_t b = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  return hex64(a) + hex64(b);
}

std::shared_ptr<Service::Session> Service::find(const std::string& session_id) const
{
  std::lock_guard lock(sessions_mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::SessionNotFound, "no session " + session_id);
  return it->second;
}

std::unique_lock<std::mutex> Service::enter(Session& s)
{
  std::unique_lock lock(s.mu);
  const auto now = options_.now();
  if (s.phase != SessionPhase::Closed && now - s.last_seen > options_.session_ttl) s.phase = SessionPhase::Closed;
  if (s.phase == SessionPhase::Closed) throw Error(ErrorCode::SessionClosed, "session " + s.id + " is closed");
  s.last_seen = now;
  return lock;
}

void Service::require_phase(const Session& s, std::initializer_list<SessionPhase> allowed, std::string_view action)
{
  for (const auto p : allowed) {
    if (s.phase == p) return;
  }
  throw Error(ErrorCode::PhaseViolation,
              std::string(action) + " is not allowed in phase " + std::string(experiment::to_string(s.phase)));
}

nlohmann::json Service::create_session(const nlohmann::json& body)
{
  if (!flag_set(body, "consent_acknowledged") || !flag_set(body, "age_confirmed")) {
    throw Error(ErrorCode::ConsentRequired, "consent_acknowledged and age_confirmed must both be true");
  }
  auto s = std::make_shared<Session>();
  s->id = fresh_session_id();
  s->condition = experiment::assign_condition(s->id, options_.study_seed, options_.assignment);
  s->last_seen = options_.now();

  nlohmann::json payload{{"mode", experiment::to_string(s->condition.mode)},
                         {"display_order", s->condition.display_order}};
  if (s->condition.attribute) payload["attribute"] = attribute_key(*s->condition.attribute);
  {
    std::lock_guard lock(sessions_mu_);
    if (sessions_.count(s->id) != 0) throw Error(ErrorCode::InvalidInput, "session id collision");
    log_.append(s->id, EventKind::SessionStarted, std::move(payload));
    sessions_.emplace(s->id, s);
  }
  return {{"session_id", s->id}, {"phase", experiment::to_string(s->phase)}, {"crisis_resources", crisis_resources_}};
}

nlohmann::json Service::submit_thought(const std::string& session_id, const nlohmann::json& body)
{
  const auto s = find(session_id);
  const auto lock = enter(*s);
  require_phase(*s, {SessionPhase::Consented}, "submitting a thought");
  ThoughtRecord record(string_field(body, "situation"), string_field(body, "thought"));

  // User text is never blocked; a crisis match only raises the banner.
  const bool crisis = !safety_.check(record.situation()).allowed || !safety_.check(record.thought()).allowed;
  const auto detected = scorer_.classify(record, record.thought());

  log_.append(s->id, EventKind::ThoughtSubmitted,
              {{"detected_traps", traps_to_json(detected)}, {"crisis_banner", crisis}});
  s->record = std::move(record);
  s->detected = detected;
  s->phase = SessionPhase::TrapsShown;

  nlohmann::json traps = nlohmann::json::array();
  for (const auto t : detected) {
    const auto& info = trap_info(t);
    traps.push_back({{"name", info.name}, {"description", info.description}, {"example", info.example}});
  }
  nlohmann::json out{{"detected_traps", traps}, {"crisis_banner", crisis}, {"phase", experiment::to_string(s->phase)}};
  if (crisis) out["crisis_resources"] = crisis_resources_;
  return out;
}

nlohmann::json Service::request_reframes(const std::string& session_id, const nlohmann::json& body)
{
  const auto s = find(session_id);
  const auto lock = enter(*s);
  require_phase(*s, {SessionPhase::TrapsShown}, "requesting reframes");
  TrapSet selected;
  if (body.is_object() && body.contains("selected_traps")) {
    if (!body["selected_traps"].is_array()) throw Error(ErrorCode::InvalidInput, "selected_traps must be an array");
    for (const auto& t : body["selected_traps"]) {
      if (!t.is_string()) throw Error(ErrorCode::InvalidInput, "selected_traps must hold trap names");
      selected.insert(parse_trap(t.get<std::string>()));
    }
  }

  std::vector<ReframeCandidate> generated;
  if (s->condition.mode == StudyMode::Preference) {
    generated = generator_.generate_condition_set(*s->record, *s->condition.attribute, selected);
  }
  else {
    auto base = generator_.generate_reframe(*s->record, selected);
    auto scores = scorer_.score_all(*s->record, base.text());
    generated.push_back(base.with_scores(scores.vector));
  }
  if (generated.size() != s->condition.display_order.size()) {
    throw Error(ErrorCode::InvalidInput, "generated candidate count does not match the condition");
  }

  std::vector<Shown> shown;
  nlohmann::json logged = nlohmann::json::array();
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto id = "c-" + hex64(mix(fnv1a64(s->id + "#" + std::to_string(i), options_.study_seed))).substr(0, 12);
    nlohmann::json c{{"candidate_id", id}, {"variant", variant_label(generated[i].variant())}, {"text", generated[i].text()}};
    if (generated[i].scores()) c["attributes"] = to_json(*generated[i].scores());
    logged.push_back(std::move(c));
    shown.push_back({id, generated[i]});
  }
  nlohmann::json payload{{"mode", experiment::to_string(s->condition.mode)},
                         {"selected_traps", traps_to_json(selected)},
                         {"candidates", logged},
                         {"display_order", s->condition.display_order}};
  if (s->condition.attribute) payload["attribute"] = attribute_key(*s->condition.attribute);
  log_.append(s->id, EventKind::ReframesShown, std::move(payload));
  s->candidates = std::move(shown);
  s->phase = SessionPhase::ReframesShown;

  // Candidates go out in display order with no labels or scores.
  nlohmann::json cards = nlohmann::json::array();
  for (std::size_t pos = 0; pos < s->condition.display_order.size(); ++pos) {
    const auto& c = s->candidates[s->condition.display_order[pos]];
    cards.push_back({{"display_index", pos}, {"candidate_id", c.candidate_id}, {"text", c.candidate.text()}});
  }
  return {{"candidates", cards}, {"phase", experiment::to_string(s->phase)}};
}

nlohmann::json Service::submit_selection(const std::string& session_id, const nlohmann::json& body)
{
  const auto s = find(session_id);
  const auto lock = enter(*s);
  require_phase(*s, {SessionPhase::ReframesShown}, "selecting a reframe");
  const auto pos = index_field(body, "display_index");
  if (pos >= s->candidates.size()) throw Error(ErrorCode::InvalidEvent, "display_index does not refer to a shown reframe");
  const auto& c = s->candidates[s->condition.display_order[pos]];
  log_.append(s->id, EventKind::ReframeSelected, {{"display_index", pos}, {"candidate_id", c.candidate_id}});
  s->phase = SessionPhase::Selected;
  return {{"ok", true}, {"phase", experiment::to_string(s->phase)}};
}

nlohmann::json Service::submit_rating(const std::string& session_id, const nlohmann::json& body)
{
  const auto s = find(session_id);
  const auto lock = enter(*s);
  if (s->condition.mode == StudyMode::Outcome) {
    require_phase(*s, {SessionPhase::ReframesShown, SessionPhase::Selected}, "rating");
  }
  else {
    require_phase(*s, {SessionPhase::Selected}, "rating");
  }
  nlohmann::json payload = nlohmann::json::object();
  for (const auto dim : experiment::kOutcomeDimensions) {
    const auto key = std::string(dim);
    if (body.is_object() && body.contains(key)) payload[key] = body[key];
  }
  log_.append(s->id, EventKind::OutcomeRated, std::move(payload));
  s->phase = SessionPhase::Rated;
  return {{"ok", true}, {"phase", experiment::to_string(s->phase)}};
}

nlohmann::json Service::flag(const std::string& session_id, const nlohmann::json& body)
{
  const auto s = find(session_id);
  const auto lock = enter(*s);
  require_phase(*s, {SessionPhase::ReframesShown, SessionPhase::Selected, SessionPhase::Rated}, "flagging");
  const auto pos = index_field(body, "display_index");
  if (pos >= s->candidates.size()) throw Error(ErrorCode::InvalidEvent, "display_index does not refer to a shown reframe");
  const auto& c = s->candidates[s->condition.display_order[pos]];
  nlohmann::json payload{{"display_index", pos}, {"candidate_id", c.candidate_id}};
  if (body.contains("reason") && body["reason"].is_string()) payload["reason"] = body["reason"];
  log_.append(s->id, EventKind::ReframeFlagged, std::move(payload));
  return {{"ok", true}, {"phase", experiment::to_string(s->phase)}, {"flagged_candidate_id", c.candidate_id}};
}

nlohmann::json Service::health() const
{
  std::size_t open = 0;
  {
    std::lock_guard lock(sessions_mu_);
    open = sessions_.size();
  }
  return {{"status", "ok"},
          {"dataset_entries", examples_.size()},
          {"dataset_fingerprint", examples_.fingerprint()},
          {"safety_patterns", safety_.size()},
          {"sessions", open}};
}

std::size_t Service::expire_idle()
{
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(sessions_mu_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  const auto now = options_.now();
  std::size_t closed = 0;
  for (const auto& s : all) {
    std::lock_guard lock(s->mu);
    if (s->phase != SessionPhase::Closed && now - s->last_seen > options_.session_ttl) {
      s->phase = SessionPhase::Closed;
      ++closed;
    }
  }
  return closed;
}

SessionPhase Service::phase(const std::string& session_id) const
{
  const auto s = find(session_id);
  std::lock_guard lock(s->mu);
  return s->phase;
}

const experiment::ExperimentCondition& Service::condition(const std::string& session_id) const
{
  return find(session_id)->condition;
}

}  // namespace reframe::service
