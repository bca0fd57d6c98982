#include "reframe/experiment/events.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "reframe/core/attributes.hpp"
#include "reframe/core/error.hpp"
#include "reframe/core/log.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/core/traps.hpp"
#include "reframe/core/types.hpp"
#include "reframe/experiment/condition.hpp"

namespace reframe::experiment {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kKindNames{{
    {EventKind::SessionStarted, "session_started"},
    {EventKind::ThoughtSubmitted, "thought_submitted"},
    {EventKind::TrapsDetected, "traps_detected"},
    {EventKind::TrapsSelected, "traps_selected"},
    {EventKind::ReframesShown, "reframes_shown"},
    {EventKind::ReframeSelected, "reframe_selected"},
    {EventKind::OutcomeRated, "outcome_rated"},
    {EventKind::ReframeFlagged, "reframe_flagged"},
}};

[[noreturn]] void invalid(const std::string& msg)
{
  throw Error(ErrorCode::InvalidEvent, msg);
}

// Non-negative integer, whether it was parsed (unsigned) or built in code (signed).
bool is_index(const nlohmann::json& v)
{
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void require_permutation(const nlohmann::json& j, std::size_t n, const char* what)
{
  if (!j.is_array() || j.size() != n) invalid(std::string(what) + " must be an array of length " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (const auto& v : j) {
    if (!is_index(v) || v.get<std::size_t>() >= n || seen[v.get<std::size_t>()]) {
      invalid(std::string(what) + " must be a permutation");
    }
    seen[v.get<std::size_t>()] = true;
  }
}

void require_traps(const nlohmann::json& payload, const char* key)
{
  if (!payload.contains(key)) invalid(std::string("missing ") + key);
  try {
    (void)traps_from_json(payload.at(key));
  }
  catch (const Error& e) {
    invalid(std::string("bad ") + key + ": " + e.what());
  }
}

void require_display_index(const nlohmann::json& payload)
{
  if (!payload.contains("display_index") || !is_index(payload["display_index"])) {
    invalid("display_index must be a non-negative integer");
  }
}

const std::string& header_line()
{
  static const std::string line = nlohmann::json{{"schema", kEventSchema}}.dump();
  return line;
}

}  // namespace

std::string_view to_string(EventKind k) noexcept
{
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

EventKind parse_event_kind(std::string_view s)
{
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  invalid("unknown event kind: " + std::string(s));
}

nlohmann::json to_json(const ExperimentEvent& e)
{
  return {{"seq", e.seq},
          {"session_id", e.session_id},
          {"timestamp", e.timestamp_ms},
          {"kind", to_string(e.kind)},
          {"payload", e.payload}};
}

ExperimentEvent event_from_json(const nlohmann::json& j)
{
  try {
    ExperimentEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.session_id = j.at("session_id").get<std::string>();
    e.timestamp_ms = j.at("timestamp").get<std::int64_t>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    return e;
  }
  catch (const nlohmann::json::exception& ex) {
    invalid(std::string("malformed event: ") + ex.what());
  }
}

void validate_payload(EventKind kind, const nlohmann::json& payload)
{
  if (!payload.is_object()) invalid("payload must be an object");
  try {
    switch (kind) {
      case EventKind::SessionStarted: {
        const auto mode = parse_study_mode(payload.at("mode").get<std::string>());
        std::optional<AttributeKind> attribute;
        if (payload.contains("attribute") && !payload["attribute"].is_null()) {
          attribute = parse_attribute(payload["attribute"].get<std::string>());
        }
        ExperimentCondition c{mode, attribute, payload.at("display_order").get<std::vector<std::size_t>>()};
        c.validate();
        break;
      }
      case EventKind::ThoughtSubmitted:
        require_traps(payload, "detected_traps");
        if (!payload.contains("crisis_banner") || !payload["crisis_banner"].is_boolean()) {
          invalid("crisis_banner must be a boolean");
        }
        break;
      case EventKind::TrapsDetected:
      case EventKind::TrapsSelected:
        require_traps(payload, "traps");
        break;
      case EventKind::ReframesShown: {
        const auto& cands = payload.at("candidates");
        if (!cands.is_array() || cands.empty()) invalid("candidates must be a nonempty array");
        for (const auto& c : cands) {
          (void)c.at("candidate_id").get<std::string>();
          (void)parse_variant_label(c.at("variant").get<std::string>());
          (void)c.at("text").get<std::string>();
          if (c.contains("attributes")) (void)attribute_vector_from_json(c["attributes"]);
        }
        require_permutation(payload.at("display_order"), cands.size(), "display_order");
        break;
      }
      case EventKind::ReframeSelected:
      case EventKind::ReframeFlagged:
        require_display_index(payload);
        break;
      case EventKind::OutcomeRated:
        for (const auto dim : kOutcomeDimensions) {
          const auto key = std::string(dim);
          if (!payload.contains(key) || !payload[key].is_number_integer()) invalid(key + " must be an integer");
          const auto v = payload[key].get<long>();
          if (v < 1 || v > 5) invalid(key + " must lie in 1..5, got " + std::to_string(v));
        }
        break;
    }
  }
  catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed ") + std::string(to_string(kind)) + " payload: " + e.what());
  }
  catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidEvent) throw;
    invalid(std::string("bad ") + std::string(to_string(kind)) + " payload: " + e.what());
  }
}

std::vector<ExperimentEvent> parse_event_log(std::string_view bytes)
{
  std::vector<ExperimentEvent> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool torn = false;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    const auto line = bytes.substr(pos, terminated ? nl - pos : std::string_view::npos);
    pos = terminated ? nl + 1 : bytes.size();
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    }
    catch (const nlohmann::json::parse_error&) {
      if (!terminated) {
        log::warn("dropping torn final event-log line " + std::to_string(line_no));
        torn = true;
        break;
      }
      throw Error(ErrorCode::ParseError, "event log line " + std::to_string(line_no) + " is not JSON");
    }
    if (!header_seen) {
      if (!j.is_object() || j.value("schema", "") != kEventSchema) {
        throw Error(ErrorCode::ParseError, "event log lacks the events/v1 header");
      }
      header_seen = true;
      continue;
    }
    try {
      out.push_back(event_from_json(j));
    }
    catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "event log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen && !torn && !bytes.empty()) throw Error(ErrorCode::ParseError, "event log lacks the events/v1 header");
  return out;
}

std::vector<ExperimentEvent> read_event_log(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageFailure, "cannot open event log " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_event_log(ss.str());
}

std::string serialize_event_log(const std::vector<ExperimentEvent>& events)
{
  std::string out = header_line() + "\n";
  for (const auto& e : events) out += to_json(e).dump() + "\n";
  return out;
}

EventLog::EventLog(Clock clock) : clock_(std::move(clock)) {}

EventLog::EventLog(const std::filesystem::path& path, Clock clock) : clock_(std::move(clock)), path_(path)
{
  std::string bytes;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bytes = ss.str();
  }
  events_ = parse_event_log(bytes);

  // Cut a torn tail so the next append starts on a fresh line.
  std::size_t keep = bytes.size();
  if (!bytes.empty() && bytes.back() != '\n') {
    const auto last_nl = bytes.rfind('\n');
    const auto tail = std::string_view(bytes).substr(last_nl == std::string::npos ? 0 : last_nl + 1);
    if (nlohmann::json::accept(tail)) {
      keep = bytes.size();
    }
    else {
      keep = last_nl == std::string::npos ? 0 : last_nl + 1;
    }
  }
  if (keep < bytes.size()) std::filesystem::resize_file(path, keep);

  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(ErrorCode::StorageFailure, "cannot open event log " + path.string() + ": " + std::strerror(errno));
  if (keep == 0) {
    write_line(header_line());
  }
  else if (bytes[keep - 1] != '\n') {
    write_line("");
  }
  for (const auto& e : events_) track(e);
  if (!events_.empty()) next_seq_ = events_.back().seq + 1;
}

EventLog::~EventLog()
{
  if (fd_ >= 0) ::close(fd_);
}

std::int64_t EventLog::system_clock_ms()
{
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void EventLog::write_line(const std::string& line)
{
  const std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    const auto n = ::write(fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::StorageFailure, std::string("event log write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error(ErrorCode::StorageFailure, std::string("fsync failed: ") + std::strerror(errno));
}

void EventLog::check_sequence(const std::string& session_id, EventKind kind, const nlohmann::json& payload) const
{
  if (session_id.empty()) invalid("session_id must be nonempty");
  const auto it = sessions_.find(session_id);
  const bool started = it != sessions_.end() && it->second.started;
  if (kind == EventKind::SessionStarted) {
    if (started) invalid("session " + session_id + " already started");
    return;
  }
  if (!started) invalid("session " + session_id + " has not started");
  if (kind == EventKind::ReframeSelected || kind == EventKind::ReframeFlagged || kind == EventKind::OutcomeRated) {
    if (!it->second.shown_count) invalid("no reframes were shown in session " + session_id);
  }
  if (kind == EventKind::ReframeSelected || kind == EventKind::ReframeFlagged) {
    if (payload["display_index"].get<std::size_t>() >= *it->second.shown_count) {
      invalid("display_index does not refer to a shown reframe");
    }
  }
}

void EventLog::track(const ExperimentEvent& e)
{
  auto& s = sessions_[e.session_id];
  if (e.kind == EventKind::SessionStarted) s.started = true;
  if (e.kind == EventKind::ReframesShown) s.shown_count = e.payload.at("candidates").size();
}

std::uint64_t EventLog::append(const std::string& session_id, EventKind kind, nlohmann::json payload)
{
  validate_payload(kind, payload);
  std::lock_guard lock(mu_);
  check_sequence(session_id, kind, payload);
  ExperimentEvent e{next_seq_, session_id, clock_(), kind, std::move(payload)};
  if (fd_ >= 0) write_line(to_json(e).dump());
  track(e);
  events_.push_back(std::move(e));
  return next_seq_++;
}

std::vector<ExperimentEvent> EventLog::events() const
{
  std::lock_guard lock(mu_);
  return events_;
}

std::size_t EventLog::size() const
{
  std::lock_guard lock(mu_);
  return events_.size();
}

}  // namespace reframe::experiment
