#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace reframe::experiment {

inline constexpr std::string_view kEventSchema = "events/v1";

enum class EventKind {
  SessionStarted,
  ThoughtSubmitted,
  TrapsDetected,
  TrapsSelected,
  ReframesShown,
  ReframeSelected,
  OutcomeRated,
  ReframeFlagged,
};

std::string_view to_string(EventKind k) noexcept;
EventKind parse_event_kind(std::string_view s);

struct ExperimentEvent {
  std::uint64_t seq = 0;
  std::string session_id;
  std::int64_t timestamp_ms = 0;
  EventKind kind = EventKind::SessionStarted;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const ExperimentEvent&, const ExperimentEvent&) = default;
};

nlohmann::json to_json(const ExperimentEvent& e);
ExperimentEvent event_from_json(const nlohmann::json& j);

/// Rating dimensions of an OutcomeRated payload.
inline constexpr std::array<std::string_view, 3> kOutcomeDimensions{"relatability", "helpfulness", "memorability"};

/// Checks a payload against its kind on its own (no cross-event state).
/// Throws Error(InvalidEvent).
void validate_payload(EventKind kind, const nlohmann::json& payload);

/// Parses log bytes: header line, then one event per line. A final line
/// without a terminating newline that fails to parse is treated as a torn
/// write and dropped with a warning; any other bad line is ParseError.
std::vector<ExperimentEvent> parse_event_log(std::string_view bytes);
std::vector<ExperimentEvent> read_event_log(const std::filesystem::path& path);
std::string serialize_event_log(const std::vector<ExperimentEvent>& events);

/// Append-only event log. Appends are serialized, validated against the
/// events already recorded for the session, written as one line, and
/// fsync'ed before the sequence number is returned.
class EventLog {
public:
  using Clock = std::function<std::int64_t()>;

  /// In-memory log, for tests and offline simulation.
  explicit EventLog(Clock clock = system_clock_ms);
  /// Opens or creates a log file, recovering from a torn final line.
  explicit EventLog(const std::filesystem::path& path, Clock clock = system_clock_ms);
  ~EventLog();

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  /// Throws Error(InvalidEvent) or Error(StorageFailure).
  std::uint64_t append(const std::string& session_id, EventKind kind, nlohmann::json payload);

  [[nodiscard]] std::vector<ExperimentEvent> events() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

  static std::int64_t system_clock_ms();

private:
  struct SessionTrack {
    bool started = false;
    std::optional<std::size_t> shown_count;
  };

  void check_sequence(const std::string& session_id, EventKind kind, const nlohmann::json& payload) const;
  void track(const ExperimentEvent& e);
  void write_line(const std::string& line);

  mutable std::mutex mu_;
  Clock clock_;
  std::optional<std::filesystem::path> path_;
  int fd_ = -1;
  std::vector<ExperimentEvent> events_;
  std::map<std::string, SessionTrack> sessions_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace reframe::experiment
