#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "reframe/dataset/snapshot.hpp"
#include "reframe/generation/generator.hpp"
#include "reframe/generation/safety.hpp"
#include "reframe/metrics/score_all.hpp"
#include "reframe/providers/provider.hpp"
#include "reframe/service/service.hpp"

namespace reframe::service {

/// Parsed configuration file. Keys: demo, providers{completion, embedding,
/// sentiment, empathy, request_timeout_ms, max_concurrency}, k, top_p,
/// temperature, mode_split, safety_patterns, dataset, event_log,
/// study_seed, session_ttl_minutes, rationality{depth, branching,
/// sound_word, flawed_word}, server{host, port}.
struct AppConfig {
  bool demo = false;
  nlohmann::json providers = nlohmann::json::object();
  int max_concurrency = 8;
  generation::GeneratorConfig generator;
  metrics::ScoringOptions scoring;
  double mode_split = 0.5;
  std::optional<std::filesystem::path> safety_patterns;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> event_log;
  std::uint64_t study_seed = 0;
  int session_ttl_minutes = 30;
  std::string host = "127.0.0.1";
  int port = 8080;

  static AppConfig from_json(const nlohmann::json& j);
  static AppConfig load(const std::filesystem::path& path);
};

/// Providers, safety filter and dataset assembled from a config.
class App {
public:
  explicit App(AppConfig config);
  ~App();

  [[nodiscard]] const AppConfig& config() const noexcept { return config_; }
  [[nodiscard]] ServiceProviders providers() const;
  [[nodiscard]] const providers::EmbeddingProvider& embedding() const;
  [[nodiscard]] const generation::SafetyFilter& safety() const noexcept { return safety_; }

  /// The configured dataset, or the synthetic demo set in demo mode.
  /// Throws InvalidInput when neither is available.
  dataset::DatasetSnapshot load_dataset(const std::optional<std::filesystem::path>& override_path = {}) const;

private:
  struct Holder;
  AppConfig config_;
  std::unique_ptr<Holder> holder_;
  generation::SafetyFilter safety_;
};

// Batch operations behind the CLI subcommands. Each reads JSON Lines from
// `in`, writes JSON Lines (or a JSON document) to `out`, and returns a
// short JSON summary.

nlohmann::json run_ingest(const App& app, const std::filesystem::path& input, std::ostream& out);
/// Input rows: {situation, thought, selected_traps?, attribute?}.
nlohmann::json run_generate(const App& app, const dataset::DatasetSnapshot& examples, std::istream& in,
                            std::ostream& out);
/// Input rows: {situation, thought, reframe, id?}.
nlohmann::json run_score(const App& app, const dataset::DatasetSnapshot& examples, std::istream& in,
                         std::ostream& out);
nlohmann::json run_correlate(std::istream& in, std::ostream& out, std::uint64_t seed, long permutations);

struct EvalOptions {
  double train_ratio = 0.7;
  std::uint64_t seed = 0;
};

/// Splits the dataset, generates a reframe for every held-out record from
/// the training split, and scores it against the human reframes with BLEU
/// (both reframes as references) and ROUGE (first reframe as reference).
nlohmann::json run_eval(const App& app, const dataset::DatasetSnapshot& dataset, const EvalOptions& options,
                        std::ostream* rows_out = nullptr);

enum class ReportFormat { Json, Csv };
nlohmann::json run_report(const std::filesystem::path& events, std::ostream& out, ReportFormat format,
                          std::uint64_t seed);

}  // namespace reframe::service
