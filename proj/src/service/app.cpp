#include "reframe/service/app.hpp"

#include <fstream>
#include <sstream>

#include "reframe/core/serialization.hpp"
#include "reframe/core/text.hpp"
#include "reframe/experiment/reports.hpp"
#include "reframe/providers/http.hpp"
#include "reframe/providers/mock.hpp"
#include "reframe/service/demo.hpp"
#include "reframe/stats/correlate.hpp"
#include "reframe/stats/text_overlap.hpp"

namespace reframe::service {

namespace {

std::vector<nlohmann::json> read_rows(std::istream& in)
{
  std::vector<nlohmann::json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    }
    catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

ThoughtRecord record_of(const nlohmann::json& row)
{
  return ThoughtRecord(row.at("situation").get<std::string>(), row.at("thought").get<std::string>());
}

TrapSet traps_of(const nlohmann::json& row, const char* key)
{
  return row.contains(key) ? traps_from_json(row[key]) : TrapSet{};
}

}  // namespace

AppConfig AppConfig::from_json(const nlohmann::json& j)
{
  AppConfig c;
  try {
    c.demo = j.value("demo", false);
    if (j.contains("providers")) c.providers = j["providers"];
    c.max_concurrency = c.providers.value("max_concurrency", c.max_concurrency);
    c.generator.k = j.value("k", c.generator.k);
    c.generator.top_p = j.value("top_p", c.generator.top_p);
    c.generator.temperature = j.value("temperature", c.generator.temperature);
    c.mode_split = j.value("mode_split", c.mode_split);
    if (j.contains("safety_patterns")) c.safety_patterns = j["safety_patterns"].get<std::string>();
    if (j.contains("dataset")) c.dataset = j["dataset"].get<std::string>();
    if (j.contains("event_log")) c.event_log = j["event_log"].get<std::string>();
    c.study_seed = j.value("study_seed", c.study_seed);
    c.session_ttl_minutes = j.value("session_ttl_minutes", c.session_ttl_minutes);
    if (j.contains("rationality")) {
      const auto& r = j["rationality"];
      c.scoring.rationality.max_depth = r.value("depth", c.scoring.rationality.max_depth);
      c.scoring.rationality.branching = r.value("branching", c.scoring.rationality.branching);
      c.scoring.rationality.sound_word = r.value("sound_word", c.scoring.rationality.sound_word);
      c.scoring.rationality.flawed_word = r.value("flawed_word", c.scoring.rationality.flawed_word);
    }
    if (j.contains("server")) {
      c.host = j["server"].value("host", c.host);
      c.port = j["server"].value("port", c.port);
    }
  }
  catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad config: ") + e.what());
  }
  if (c.max_concurrency < 1 || c.max_concurrency > providers::ConcurrencyLimitedCompletionProvider::kMaxLimit) {
    throw Error(ErrorCode::InvalidInput, "max_concurrency out of range");
  }
  c.scoring.rationality.validate();
  return c;
}

AppConfig AppConfig::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open config " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  }
  catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "config " + path.string() + " is not JSON: " + e.what());
  }
}

struct App::Holder {
  std::unique_ptr<DemoProviders> demo;
  std::unique_ptr<providers::CompletionProvider> completion;
  std::unique_ptr<providers::EmbeddingProvider> embedding;
  std::unique_ptr<providers::ScoreProvider> sentiment;
  std::unique_ptr<providers::ScoreProvider> empathy;
  std::unique_ptr<providers::ConcurrencyLimitedCompletionProvider> limited;
};

App::App(AppConfig config)
    : config_(std::move(config)), holder_(std::make_unique<Holder>()),
      safety_(config_.safety_patterns ? generation::SafetyFilter::load(*config_.safety_patterns)
                                      : generation::SafetyFilter::shipped())
{
  const providers::CompletionProvider* completion = nullptr;
  if (config_.demo) {
    holder_->demo = std::make_unique<DemoProviders>(config_.study_seed);
    completion = &holder_->demo->completion;
  }
  else {
    const auto pc = providers::ProviderConfig::from_json(config_.providers);
    if (!pc.completion || !pc.embedding || !pc.sentiment || !pc.empathy) {
      throw Error(ErrorCode::InvalidInput,
                  "config must name completion, embedding, sentiment and empathy endpoints (or set demo: true)");
    }
    holder_->completion = std::make_unique<providers::HttpCompletionProvider>(*pc.completion);
    holder_->embedding = std::make_unique<providers::HttpEmbeddingProvider>(*pc.embedding);
    holder_->sentiment = std::make_unique<providers::HttpScoreProvider>(*pc.sentiment);
    holder_->empathy = std::make_unique<providers::HttpScoreProvider>(*pc.empathy);
    completion = holder_->completion.get();
  }
  holder_->limited = std::make_unique<providers::ConcurrencyLimitedCompletionProvider>(*completion, config_.max_concurrency);
}

App::~App() = default;

ServiceProviders App::providers() const
{
  if (holder_->demo) {
    return {*holder_->limited, holder_->demo->embedding, holder_->demo->sentiment, holder_->demo->empathy};
  }
  return {*holder_->limited, *holder_->embedding, *holder_->sentiment, *holder_->empathy};
}

const providers::EmbeddingProvider& App::embedding() const
{
  return providers().embedding;
}

dataset::DatasetSnapshot App::load_dataset(const std::optional<std::filesystem::path>& override_path) const
{
  const auto path = override_path ? override_path : config_.dataset;
  if (path) return dataset::ingest(*path, embedding());
  if (config_.demo) return demo_dataset(embedding());
  throw Error(ErrorCode::InvalidInput, "no dataset configured (pass --dataset or set \"dataset\" in the config)");
}

nlohmann::json run_ingest(const App& app, const std::filesystem::path& input, std::ostream& out)
{
  const auto snapshot = dataset::ingest(input, app.embedding());
  dataset::write_dataset(out, snapshot.entries());
  return {{"entries", snapshot.size()}, {"fingerprint", snapshot.fingerprint()}};
}

nlohmann::json run_generate(const App& app, const dataset::DatasetSnapshot& examples, std::istream& in,
                            std::ostream& out)
{
  const auto p = app.providers();
  generation::ReframeGenerator generator(examples, p.completion, p.embedding, app.safety(), app.config().generator);
  std::size_t n = 0;
  for (const auto& row : read_rows(in)) {
    const auto record = record_of(row);
    const auto selected = traps_of(row, "selected_traps");
    std::vector<ReframeCandidate> cands;
    if (row.contains("attribute")) {
      cands = generator.generate_condition_set(record, parse_attribute(row["attribute"].get<std::string>()), selected);
    }
    else {
      cands.push_back(generator.generate_reframe(record, selected));
    }
    nlohmann::json reframes = nlohmann::json::array();
    for (const auto& c : cands) reframes.push_back({{"variant", variant_label(c.variant())}, {"text", c.text()}});
    out << nlohmann::json{{"situation", record.situation()}, {"thought", record.thought()}, {"reframes", reframes}}.dump()
        << '\n';
    ++n;
  }
  return {{"generated", n}};
}

nlohmann::json run_score(const App& app, const dataset::DatasetSnapshot& examples, std::istream& in,
                         std::ostream& out)
{
  const auto p = app.providers();
  metrics::AttributeScorer scorer(p.completion, p.embedding, p.sentiment, p.empathy, app.config().scoring);
  if (!examples.empty()) scorer.set_trap_examples(examples);
  std::size_t n = 0;
  std::size_t partial = 0;
  for (const auto& row : read_rows(in)) {
    const auto record = record_of(row);
    const auto reframe = row.at("reframe").get<std::string>();
    nlohmann::json result{{"situation", record.situation()}, {"thought", record.thought()}, {"reframe", reframe}};
    if (row.contains("id")) result["id"] = row["id"];
    try {
      const auto report = scorer.score_all(record, reframe);
      result["attributes"] = to_json(report.vector);
      nlohmann::json failures = nlohmann::json::object();
      for (const auto& [attr, msg] : report.failures) failures[std::string(attribute_key(attr))] = msg;
      result["failures"] = failures;
      if (!report.failures.empty()) ++partial;
    }
    catch (const Error& e) {
      result["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      ++partial;
    }
    out << result.dump() << '\n';
    ++n;
  }
  return {{"scored", n}, {"with_failures", partial}};
}

nlohmann::json run_correlate(std::istream& in, std::ostream& out, std::uint64_t seed, long permutations)
{
  const auto rows = stats::read_score_pairs(in);
  const auto results = stats::correlate(rows, {permutations, seed});
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, r] : results) {
    doc[name] = {{"r", r.r}, {"n", r.n}, {"p_value", r.p_value}, {"permutations", r.permutations}};
  }
  out << doc.dump(2) << '\n';
  return {{"groups", results.size()}, {"rows", rows.size()}};
}

nlohmann::json run_eval(const App& app, const dataset::DatasetSnapshot& dataset, const EvalOptions& options,
                        std::ostream* rows_out)
{
  const auto [train, test] = dataset::split(dataset, options.train_ratio, options.seed);
  if (test.empty()) throw Error(ErrorCode::EmptyDataset, "held-out split is empty");
  const auto p = app.providers();
  auto gen_config = app.config().generator;
  gen_config.seed = options.seed;
  generation::ReframeGenerator generator(train, p.completion, p.embedding, app.safety(), gen_config);

  std::vector<std::string> candidates;
  std::vector<std::vector<std::string>> references;
  double bleu_sum = 0.0, r1_sum = 0.0, rl_sum = 0.0;
  for (const auto& e : test.entries()) {
    const auto cand = generator.generate_reframe(e.record).text();
    std::vector<std::string> refs{e.reframe_a, e.reframe_b};
    const double b = stats::bleu(cand, refs);
    const double r1 = stats::rouge(cand, e.reframe_a, stats::RougeVariant::R1);
    const double rl = stats::rouge(cand, e.reframe_a, stats::RougeVariant::RL);
    bleu_sum += b;
    r1_sum += r1;
    rl_sum += rl;
    if (rows_out != nullptr) {
      *rows_out << nlohmann::json{{"entry_id", e.id}, {"candidate", cand}, {"bleu", b}, {"rouge1", r1}, {"rougeL", rl}}.dump()
                << '\n';
    }
    candidates.push_back(cand);
    references.push_back(std::move(refs));
  }
  const double n = static_cast<double>(test.size());
  auto scaled = [](double v) { return nlohmann::json{{"raw", v}, {"x100", 100.0 * v}}; };
  return {{"train", train.size()},
          {"test", test.size()},
          {"seed", options.seed},
          {"sentence_bleu", scaled(bleu_sum / n)},
          {"corpus_bleu", scaled(stats::corpus_bleu(candidates, references))},
          {"rouge1", scaled(r1_sum / n)},
          {"rougeL", scaled(rl_sum / n)}};
}

nlohmann::json run_report(const std::filesystem::path& events_path, std::ostream& out, ReportFormat format,
                          std::uint64_t seed)
{
  const auto events = experiment::read_event_log(events_path);
  experiment::ReportOptions options;
  options.seed = seed;
  nlohmann::json doc = nlohmann::json::object();
  std::string csv;
  try {
    const auto pref = experiment::preference_report(events, options);
    doc["preference"] = to_json(pref);
    csv += "# preference\n" + experiment::to_csv(pref);
  }
  catch (const Error& e) {
    doc["preference"] = {{"error", to_string(e.code())}, {"message", e.what()}};
  }
  try {
    const auto outcome = experiment::outcome_report(events, options);
    doc["outcome"] = to_json(outcome);
    csv += (csv.empty() ? "" : "\n") + std::string("# outcome\n") + experiment::to_csv(outcome);
  }
  catch (const Error& e) {
    doc["outcome"] = {{"error", to_string(e.code())}, {"message", e.what()}};
  }
  nlohmann::json phases = nlohmann::json::object();
  for (const auto& [id, phase] : experiment::replay_phases(events)) phases[id] = experiment::to_string(phase);
  doc["final_phases"] = phases;
  if (format == ReportFormat::Json) {
    out << doc.dump(2) << '\n';
  }
  else {
    out << csv;
  }
  return {{"events", events.size()}, {"sessions", phases.size()}};
}

}  // namespace reframe::service
