#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/core/types.hpp"
#include "reframe/providers/provider.hpp"

namespace reframe::dataset {

class DatasetParseError : public Error {
public:
  DatasetParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class DatasetValidationError : public Error {
public:
  DatasetValidationError(std::string entry_id, std::vector<Violation> violations, const std::string& what);

  [[nodiscard]] const std::string& entry_id() const noexcept { return entry_id_; }
  [[nodiscard]] const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
  std::string entry_id_;
  std::vector<Violation> violations_;
};

/// Immutable set of validated entries with unit-normalized situation and
/// thought embeddings. Copies share storage.
class DatasetSnapshot {
public:
  DatasetSnapshot();

  /// Validates every entry (ids must be unique) and embeds all situations and
  /// thoughts. Throws DatasetValidationError or provider errors.
  static DatasetSnapshot build(std::vector<DatasetEntry> entries, const providers::EmbeddingProvider& embedder);

  [[nodiscard]] std::size_t size() const noexcept { return data_->entries.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_->entries.empty(); }
  [[nodiscard]] const std::vector<DatasetEntry>& entries() const noexcept { return data_->entries; }
  [[nodiscard]] const DatasetEntry& entry(std::size_t i) const { return data_->entries.at(i); }
  [[nodiscard]] const providers::EmbeddingVector& situation_embedding(std::size_t i) const
  {
    return data_->situations.at(i);
  }
  [[nodiscard]] const providers::EmbeddingVector& thought_embedding(std::size_t i) const
  {
    return data_->thoughts.at(i);
  }
  /// Content hash over the canonical serialization of the entries.
  [[nodiscard]] const std::string& fingerprint() const noexcept { return data_->fingerprint; }
  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view id) const;

  /// Entries at `indices` (in that order) with their embeddings reused.
  [[nodiscard]] DatasetSnapshot subset(const std::vector<std::size_t>& indices) const;

private:
  struct Data {
    std::vector<DatasetEntry> entries;
    std::vector<providers::EmbeddingVector> situations;
    std::vector<providers::EmbeddingVector> thoughts;
    std::string fingerprint;
  };

  explicit DatasetSnapshot(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  static std::string compute_fingerprint(const std::vector<DatasetEntry>& entries);

  std::shared_ptr<const Data> data_;
};

/// Parses JSON Lines; blank lines are skipped. Throws DatasetParseError with
/// the 1-based line number of the first bad line.
std::vector<DatasetEntry> parse_dataset(std::istream& in);

/// parse_dataset + DatasetSnapshot::build.
DatasetSnapshot ingest(const std::filesystem::path& path, const providers::EmbeddingProvider& embedder);

/// Writes entries as JSON Lines.
void write_dataset(std::ostream& out, const std::vector<DatasetEntry>& entries);

/// Deterministic shuffle by `seed`; |train| = round(ratio * N). Both halves
/// keep the original relative order of their entries.
std::pair<DatasetSnapshot, DatasetSnapshot> split(const DatasetSnapshot& snapshot, double ratio, std::uint64_t seed);

/// Holds the live snapshot; re-ingest swaps a new one in.
class SnapshotStore {
public:
  explicit SnapshotStore(DatasetSnapshot initial = {}) : current_(std::move(initial)) {}

  [[nodiscard]] DatasetSnapshot get() const
  {
    std::lock_guard lock(mutex_);
    return current_;
  }
  void swap_in(DatasetSnapshot next)
  {
    std::lock_guard lock(mutex_);
    current_ = std::move(next);
  }

private:
  mutable std::mutex mutex_;
  DatasetSnapshot current_;
};

}  // namespace reframe::dataset
