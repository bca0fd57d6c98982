#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reframe/stats/correlation.hpp"

namespace reframe::stats {

/// One row of the correlate input: a metric score and a human score for the
/// same item. Rows without an attribute are grouped under "all".
struct ScorePair {
  std::string entry_id;
  double metric_score = 0.0;
  double human_score = 0.0;
  std::optional<std::string> attribute;
};

std::vector<ScorePair> read_score_pairs(std::istream& in);
void write_score_pairs(std::ostream& out, const std::vector<ScorePair>& rows);

struct CorrelateOptions {
  long permutations = 10000;
  std::uint64_t seed = 0;
};

/// Pearson correlation per attribute group, keyed by attribute name.
std::map<std::string, CorrelationResult> correlate(const std::vector<ScorePair>& rows,
                                                   const CorrelateOptions& options = {});

/// n score pairs whose sample correlation is exactly r: the noise is
/// residualized against the signal before mixing.
std::vector<ScorePair> planted_correlation_pairs(std::size_t n, double r, std::uint64_t seed,
                                                 const std::string& attribute = "all");

}  // namespace reframe::stats
