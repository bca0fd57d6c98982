// Operator CLI: ingest, generate, score, correlate, eval, report, serve.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "reframe/core/error.hpp"
#include "reframe/experiment/events.hpp"
#include "reframe/service/app.hpp"
#include "reframe/service/http_api.hpp"
#include "reframe/service/service.hpp"

namespace {

using namespace reframe;

struct Common {
  std::uint64_t seed = 0;
  std::string config;
  std::string input;
  std::string output;
  bool demo = false;
};

void add_common(CLI::App* cmd, Common& c, bool needs_input)
{
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  auto* in = cmd->add_option("--input", c.input, "Input path (JSON Lines)");
  if (needs_input) in->required();
  cmd->add_option("--output", c.output, "Output path (default: stdout)");
  cmd->add_flag("--demo", c.demo, "Use the offline demo providers and synthetic dataset");
}

service::AppConfig load_config(const Common& c)
{
  auto cfg = c.config.empty() ? service::AppConfig{} : service::AppConfig::load(c.config);
  if (c.demo) cfg.demo = true;
  return cfg;
}

/// Runs `fn` with an output stream bound to --output or stdout.
template <typename Fn>
nlohmann::json with_output(const std::string& path, Fn fn)
{
  if (path.empty()) return fn(std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  return fn(out);
}

std::ifstream open_input(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  return in;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Cognitive reframing engine"};
  app.require_subcommand(1);

  Common c;
  std::string dataset_path;
  long permutations = 10000;
  double ratio = 0.7;
  std::string rows_path;
  std::string format = "json";
  std::string host;
  int port = 0;
  std::string event_log;

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a dataset file");
  add_common(ingest, c, true);

  auto* generate = app.add_subcommand("generate", "Generate reframes for thought records");
  add_common(generate, c, true);
  generate->add_option("--dataset", dataset_path, "Example dataset (JSON Lines)");

  auto* score = app.add_subcommand("score", "Measure the seven attributes of reframes");
  add_common(score, c, true);
  score->add_option("--dataset", dataset_path, "Dataset for trap-classification examples");

  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of metric and human scores");
  add_common(correlate, c, true);
  correlate->add_option("--permutations", permutations, "Permutations for the p-value")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "BLEU/ROUGE of generated reframes on a held-out split");
  add_common(eval, c, false);
  eval->add_option("--ratio", ratio, "Training share of the split")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--rows", rows_path, "Write per-item scores here (JSON Lines)");

  auto* report = app.add_subcommand("report", "Preference and outcome reports from an event log");
  add_common(report, c, true);
  report->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* serve = app.add_subcommand("serve", "Run the /api/v1 HTTP service");
  add_common(serve, c, false);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--event-log", event_log, "Event log path (JSON Lines)");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json summary;
    if (ingest->parsed()) {
      service::App a(load_config(c));
      summary = with_output(c.output, [&](std::ostream& out) { return service::run_ingest(a, c.input, out); });
    }
    else if (generate->parsed() || score->parsed()) {
      auto cfg = load_config(c);
      cfg.generator.seed = c.seed;
      service::App a(cfg);
      const auto examples = a.load_dataset(dataset_path.empty() ? std::nullopt
                                                                : std::optional<std::filesystem::path>(dataset_path));
      auto in = open_input(c.input);
      summary = with_output(c.output, [&](std::ostream& out) {
        return generate->parsed() ? service::run_generate(a, examples, in, out) : service::run_score(a, examples, in, out);
      });
    }
    else if (correlate->parsed()) {
      auto in = open_input(c.input);
      summary = with_output(c.output,
                            [&](std::ostream& out) { return service::run_correlate(in, out, c.seed, permutations); });
    }
    else if (eval->parsed()) {
      service::App a(load_config(c));
      const auto data = a.load_dataset(c.input.empty() ? std::nullopt : std::optional<std::filesystem::path>(c.input));
      std::optional<std::ofstream> rows;
      if (!rows_path.empty()) rows.emplace(rows_path, std::ios::binary);
      const auto result = service::run_eval(a, data, {ratio, c.seed}, rows ? &*rows : nullptr);
      summary = with_output(c.output, [&](std::ostream& out) {
        out << result.dump(2) << '\n';
        return nlohmann::json{{"test", result["test"]}};
      });
    }
    else if (report->parsed()) {
      const auto fmt = format == "csv" ? service::ReportFormat::Csv : service::ReportFormat::Json;
      summary = with_output(c.output, [&](std::ostream& out) { return service::run_report(c.input, out, fmt, c.seed); });
    }
    else if (serve->parsed()) {
      auto cfg = load_config(c);
      if (!host.empty()) cfg.host = host;
      if (port != 0) cfg.port = port;
      if (!event_log.empty()) cfg.event_log = event_log;
      if (serve->count("--seed") != 0) cfg.study_seed = c.seed;
      if (!cfg.event_log) throw Error(ErrorCode::InvalidInput, "serve needs --event-log or \"event_log\" in the config");
      service::App a(cfg);
      experiment::EventLog log(*cfg.event_log);
      service::ServiceOptions options;
      options.generator = cfg.generator;
      options.scoring = cfg.scoring;
      options.assignment.preference_share = cfg.mode_split;
      options.study_seed = cfg.study_seed;
      options.session_ttl = std::chrono::minutes(cfg.session_ttl_minutes);
      service::Service svc(a.providers(), a.load_dataset(), a.safety(), log, options);
      service::serve(svc, cfg.host, cfg.port);
      return 0;
    }
    std::cerr << summary.dump() << '\n';
  }
  catch (const reframe::Error& e) {
    std::cerr << "error [" << reframe::to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
