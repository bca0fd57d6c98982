#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reframe/core/types.hpp"
#include "reframe/dataset/snapshot.hpp"
#include "reframe/experiment/condition.hpp"
#include "reframe/experiment/events.hpp"
#include "reframe/experiment/reports.hpp"
#include "reframe/generation/generator.hpp"
#include "reframe/generation/safety.hpp"
#include "reframe/metrics/score_all.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::service {

using experiment::SessionPhase;

struct ServiceOptions {
  generation::GeneratorConfig generator;
  metrics::ScoringOptions scoring;
  experiment::AssignmentConfig assignment;
  std::uint64_t study_seed = 0;
  std::chrono::minutes session_ttl{30};
  std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
  /// Session id source; the default draws from a random device.
  std::function<std::string()> next_session_id;
};

struct ServiceProviders {
  const providers::CompletionProvider& completion;
  const providers::EmbeddingProvider& embedding;
  const providers::ScoreProvider& sentiment;
  const providers::ScoreProvider& empathy;
};

/// HTTP status for an error code, and whether a client may retry.
int http_status(ErrorCode code) noexcept;
bool retryable(ErrorCode code) noexcept;
nlohmann::json error_body(ErrorCode code, std::string_view message);

/// The guided reframing flow. Every method takes and returns JSON bodies
/// exactly as they travel over /api/v1 and throws reframe::Error on failure.
/// Requests for one session are serialized; different sessions proceed in
/// parallel.
class Service {
public:
  Service(ServiceProviders providers, dataset::DatasetSnapshot examples, generation::SafetyFilter safety,
          experiment::EventLog& log, ServiceOptions options = {});

  nlohmann::json create_session(const nlohmann::json& body);
  nlohmann::json submit_thought(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json request_reframes(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json submit_selection(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json submit_rating(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json flag(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json health() const;

  /// Closes sessions idle for longer than the TTL; returns how many.
  std::size_t expire_idle();

  [[nodiscard]] SessionPhase phase(const std::string& session_id) const;
  [[nodiscard]] const experiment::ExperimentCondition& condition(const std::string& session_id) const;

private:
  struct Shown {
    std::string candidate_id;
    ReframeCandidate candidate;
  };

  struct Session {
    std::mutex mu;
    std::string id;
    SessionPhase phase = SessionPhase::Consented;
    experiment::ExperimentCondition condition;
    std::optional<ThoughtRecord> record;
    TrapSet detected;
    std::vector<Shown> candidates;  // generation order
    std::chrono::steady_clock::time_point last_seen;
  };

  std::shared_ptr<Session> find(const std::string& session_id) const;
  /// Locks the session, rejecting closed or expired ones.
  std::unique_lock<std::mutex> enter(Session& s);
  static void require_phase(const Session& s, std::initializer_list<SessionPhase> allowed, std::string_view action);
  std::string fresh_session_id();

  ServiceProviders providers_;
  dataset::DatasetSnapshot examples_;
  generation::SafetyFilter safety_;
  experiment::EventLog& log_;
  ServiceOptions options_;
  generation::ReframeGenerator generator_;
  metrics::AttributeScorer scorer_;
  nlohmann::json crisis_resources_;

  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace reframe::service
