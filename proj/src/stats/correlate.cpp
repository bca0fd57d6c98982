#include "reframe/stats/correlate.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "reframe/core/error.hpp"
#include "reframe/core/random.hpp"
#include "reframe/core/text.hpp"

namespace reframe::stats {

namespace {

constexpr std::string_view kAllGroup = "all";

}  // namespace

std::vector<ScorePair> read_score_pairs(std::istream& in)
{
  std::vector<ScorePair> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScorePair row;
      row.entry_id = j.at("entry_id").get<std::string>();
      row.metric_score = j.at("metric_score").get<double>();
      row.human_score = j.at("human_score").get<double>();
      if (j.contains("attribute") && !j["attribute"].is_null()) row.attribute = j["attribute"].get<std::string>();
      rows.push_back(std::move(row));
    }
    catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_score_pairs(std::ostream& out, const std::vector<ScorePair>& rows)
{
  for (const auto& row : rows) {
    nlohmann::json j{{"entry_id", row.entry_id}, {"metric_score", row.metric_score}, {"human_score", row.human_score}};
    if (row.attribute) j["attribute"] = *row.attribute;
    out << j.dump() << '\n';
  }
}

std::map<std::string, CorrelationResult> correlate(const std::vector<ScorePair>& rows, const CorrelateOptions& options)
{
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& row : rows) {
    auto& g = groups[row.attribute.value_or(std::string(kAllGroup))];
    g.first.push_back(row.metric_score);
    g.second.push_back(row.human_score);
  }
  if (groups.empty()) throw Error(ErrorCode::InsufficientData, "no score pairs to correlate");
  std::map<std::string, CorrelationResult> out;
  std::uint64_t salt = 0;
  for (const auto& [name, g] : groups) {
    out.emplace(name, pearson(g.first, g.second, options.permutations, options.seed + salt++));
  }
  return out;
}

std::vector<ScorePair> planted_correlation_pairs(std::size_t n, double r, std::uint64_t seed,
                                                 const std::string& attribute)
{
  if (n < 3) throw Error(ErrorCode::InvalidInput, "need at least 3 pairs");
  if (!(r >= -1.0 && r <= 1.0)) throw Error(ErrorCode::InvalidInput, "r must lie in [-1, 1]");
  Rng rng(seed);
  std::vector<double> x(n), e(n);
  for (auto& v : x) v = rng.normal();
  for (auto& v : e) v = rng.normal();

  auto center_scale = [](std::vector<double>& v) {
    double m = 0.0;
    for (const double a : v) m += a;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (auto& a : v) {
      a -= m;
      ss += a * a;
    }
    const double s = std::sqrt(ss);
    for (auto& a : v) a /= s;
  };
  center_scale(x);
  center_scale(e);
  double proj = 0.0;
  for (std::size_t i = 0; i < n; ++i) proj += x[i] * e[i];
  for (std::size_t i = 0; i < n; ++i) e[i] -= proj * x[i];
  center_scale(e);

  const double noise = std::sqrt(std::max(0.0, 1.0 - r * r));
  std::vector<ScorePair> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Put the scores on a human-looking scale; affine maps keep r.
    rows.push_back({"planted-" + std::to_string(i), 0.5 + x[i], 3.0 + 10.0 * (r * x[i] + noise * e[i]), attribute});
  }
  return rows;
}

}  // namespace reframe::stats
