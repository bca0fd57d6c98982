#include "reframe/dataset/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "reframe/core/random.hpp"
#include "reframe/core/serialization.hpp"
#include "reframe/core/text.hpp"

namespace reframe::dataset {

namespace {

std::string join_violations(const std::vector<Violation>& violations)
{
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += ", ";
    out += describe(v);
  }
  return out;
}

}  // namespace

DatasetValidationError::DatasetValidationError(std::string entry_id, std::vector<Violation> violations,
                                               const std::string& what)
    : Error(ErrorCode::ValidationError, what), entry_id_(std::move(entry_id)), violations_(std::move(violations))
{
}

DatasetSnapshot::DatasetSnapshot()
    : data_(std::make_shared<const Data>(Data{{}, {}, {}, compute_fingerprint({})}))
{
}

DatasetSnapshot DatasetSnapshot::build(std::vector<DatasetEntry> entries,
                                       const providers::EmbeddingProvider& embedder)
{
  std::set<std::string, std::less<>> ids;
  for (const auto& e : entries) {
    auto violations = validate_entry(e);
    if (!ids.insert(e.id).second) violations.push_back({ViolationKind::DuplicateId, std::nullopt});
    if (!violations.empty()) {
      throw DatasetValidationError(e.id, violations,
                                   "entry '" + e.id + "' is invalid: " + join_violations(violations));
    }
  }

  Data data;
  data.fingerprint = compute_fingerprint(entries);
  if (!entries.empty()) {
    std::vector<std::string> situations;
    std::vector<std::string> thoughts;
    situations.reserve(entries.size());
    thoughts.reserve(entries.size());
    for (const auto& e : entries) {
      situations.push_back(e.record.situation());
      thoughts.push_back(e.record.thought());
    }
    auto s_emb = embedder.embed(situations);
    auto t_emb = embedder.embed(thoughts);
    if (s_emb.size() != entries.size() || t_emb.size() != entries.size()) {
      throw providers::ProviderError(ErrorCode::MalformedResponse, "embedding count mismatch");
    }
    const auto dim = s_emb.front().dim();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (s_emb[i].dim() != dim || t_emb[i].dim() != dim) {
        throw providers::ProviderError(ErrorCode::MalformedResponse, "embedding dimensions differ");
      }
      data.situations.push_back(s_emb[i].normalized());
      data.thoughts.push_back(t_emb[i].normalized());
    }
  }
  data.entries = std::move(entries);
  return DatasetSnapshot(std::make_shared<const Data>(std::move(data)));
}

std::optional<std::size_t> DatasetSnapshot::index_of(std::string_view id) const
{
  for (std::size_t i = 0; i < data_->entries.size(); ++i) {
    if (data_->entries[i].id == id) return i;
  }
  return std::nullopt;
}

DatasetSnapshot DatasetSnapshot::subset(const std::vector<std::size_t>& indices) const
{
  Data data;
  for (const auto i : indices) {
    data.entries.push_back(data_->entries.at(i));
    data.situations.push_back(data_->situations.at(i));
    data.thoughts.push_back(data_->thoughts.at(i));
  }
  data.fingerprint = compute_fingerprint(data.entries);
  return DatasetSnapshot(std::make_shared<const Data>(std::move(data)));
}

std::string DatasetSnapshot::compute_fingerprint(const std::vector<DatasetEntry>& entries)
{
  std::uint64_t h = fnv1a64("dataset/v1");
  for (const auto& e : entries) {
    h = fnv1a64(to_json(e).dump(), h);
    h = fnv1a64("\n", h);
  }
  return hex64(h);
}

std::vector<DatasetEntry> parse_dataset(std::istream& in)
{
  std::vector<DatasetEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(dataset_entry_from_json(nlohmann::json::parse(line)));
    }
    catch (const nlohmann::json::exception& e) {
      throw DatasetParseError(line_no, e.what());
    }
    catch (const Error& e) {
      throw DatasetParseError(line_no, e.what());
    }
  }
  return out;
}

DatasetSnapshot ingest(const std::filesystem::path& path, const providers::EmbeddingProvider& embedder)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open dataset file " + path.string());
  return DatasetSnapshot::build(parse_dataset(in), embedder);
}

void write_dataset(std::ostream& out, const std::vector<DatasetEntry>& entries)
{
  for (const auto& e : entries) out << to_json(e).dump() << '\n';
}

std::pair<DatasetSnapshot, DatasetSnapshot> split(const DatasetSnapshot& snapshot, double ratio, std::uint64_t seed)
{
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidInput, "split ratio must be in (0, 1)");
  if (snapshot.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  const auto n = snapshot.size();
  Rng rng(seed);
  const auto order = rng.permutation(n);
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {snapshot.subset(train), snapshot.subset(test)};
}

}  // namespace reframe::dataset
