#pragma once

// Access to checked-in fixtures and golden files.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "reframe/dataset/snapshot.hpp"
#include "reframe/providers/provider.hpp"

namespace fixtures {

std::filesystem::path path(const std::string& relative);
std::string read_text(const std::filesystem::path& p);
std::vector<std::string> read_lines(const std::filesystem::path& p);

/// tests/fixtures/reframes_600.jsonl embedded with `embedder`.
reframe::dataset::DatasetSnapshot reframes_600(const reframe::providers::EmbeddingProvider& embedder);

/// The prompts pinned by golden files, as (file name, rendered text): one
/// generation prompt, both trap-variant prompts and a rewrite prompt per
/// attribute and direction.
std::vector<std::pair<std::string, std::string>> golden_prompts();

struct GoldenResult {
  bool ok = true;
  std::vector<std::string> mismatched;
};

/// Compares each prompt against tests/golden/<name>. With REFRAME_UPDATE_GOLDEN
/// set in the environment the files are rewritten instead.
GoldenResult check_golden(const std::vector<std::pair<std::string, std::string>>& prompts);

}  // namespace fixtures
