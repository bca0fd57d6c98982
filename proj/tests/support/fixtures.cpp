#include "fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reframe/core/error.hpp"
#include "reframe/generation/generator.hpp"
#include "reframe/providers/mock.hpp"

namespace fixtures {

using namespace reframe;

std::filesystem::path path(const std::string& relative)
{
  return std::filesystem::path(REFRAME_TEST_DIR) / relative;
}

std::string read_text(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& p)
{
  std::vector<std::string> out;
  std::istringstream in(read_text(p));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

dataset::DatasetSnapshot reframes_600(const providers::EmbeddingProvider& embedder)
{
  return dataset::ingest(path("fixtures/reframes_600.jsonl"), embedder);
}

std::vector<std::pair<std::string, std::string>> golden_prompts()
{
  // Prompt rendering never calls the completion provider.
  static const providers::HashEmbeddingProvider embedder(256, 0);
  const providers::MockCompletionProvider unused([](const providers::CompletionRequest&, int) {
    return providers::CompletionChoice{"unused", {}};
  });
  generation::GeneratorConfig cfg;
  cfg.seed = 17;
  const generation::ReframeGenerator gen(reframes_600(embedder), unused, embedder, generation::SafetyFilter::shipped(),
                                         cfg);
  const ThoughtRecord record("I submitted my first paper to a conference last month.",
                             "This paper is going to get rejected.");
  const TrapSet selected{ThinkingTrap::FortuneTelling};
  const std::string base = "I can't know yet how the reviews will turn out, and I learned a lot writing it.";

  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("generation.txt", gen.generation_prompt(record, selected).rendered);
  out.emplace_back("trap_addressing.txt", gen.trap_prompt(record, true, selected).rendered);
  out.emplace_back("trap_not_addressing.txt", gen.trap_prompt(record, false, selected).rendered);
  for (const auto a : kComparableAttributes) {
    for (const auto d : {generation::Direction::High, generation::Direction::Low}) {
      out.emplace_back("rewrite_" + std::string(attribute_key(a)) + (d == generation::Direction::High ? "_high" : "_low") +
                           ".txt",
                       gen.rewrite_prompt(base, a, d, &record).rendered);
    }
  }
  return out;
}

GoldenResult check_golden(const std::vector<std::pair<std::string, std::string>>& prompts)
{
  GoldenResult result;
  const bool update = std::getenv("REFRAME_UPDATE_GOLDEN") != nullptr;
  for (const auto& [name, text] : prompts) {
    const auto p = path("golden/" + name);
    if (update) {
      std::ofstream(p, std::ios::binary) << text;
      continue;
    }
    std::string want;
    try {
      want = read_text(p);
    }
    catch (const Error&) {
      want = "\x01missing";
    }
    if (want != text) {
      result.ok = false;
      result.mismatched.push_back(name);
    }
  }
  return result;
}

}  // namespace fixtures
