#include <doctest.h>

#include <atomic>
#include <set>

#include "expect.hpp"
#include "fixtures.hpp"
#include "reframe/dataset/retrieval.hpp"
#include "reframe/dataset/synthetic.hpp"
#include "reframe/generation/generator.hpp"
#include "reframe/providers/mock.hpp"

using namespace reframe;
using namespace reframe::generation;
using providers::CompletionChoice;
using providers::CompletionRequest;

namespace {

const providers::HashEmbeddingProvider& embedder()
{
  static const providers::HashEmbeddingProvider e(256, 0);
  return e;
}

const ThoughtRecord kRecord("My mentor corrected me in front of everyone.", "I always ruin everything.");

dataset::DatasetSnapshot small_snapshot(std::size_t n = 60)
{
  return dataset::DatasetSnapshot::build(dataset::make_synthetic_dataset(n, 5), embedder());
}

/// Distinct text per prompt and call.
providers::MockCompletionProvider echo_provider()
{
  return providers::MockCompletionProvider([](const CompletionRequest& req, int) {
    static std::atomic<int> counter{0};
    return CompletionChoice{" \"Reframe " + providers::prompt_fingerprint(req.prompt).substr(0, 6) + "-" +
                                std::to_string(counter++) + "\"\n\nextra paragraph",
                            {}};
  });
}

/// Entries whose reframes both address traps, except the first `non_addressing`
/// which have an empty traps_b.
std::vector<DatasetEntry> trap_pool_entries(std::size_t addressing, std::size_t non_addressing)
{
  auto entries = dataset::make_synthetic_dataset(addressing + non_addressing, 9);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].traps_a = {ThinkingTrap::Labeling};
    entries[i].traps_b = i < non_addressing ? TrapSet{} : TrapSet{ThinkingTrap::Blaming};
  }
  return entries;
}

}  // namespace

TEST_CASE("shipped safety patterns block their fixture phrases")
{
  const auto filter = SafetyFilter::shipped();
  const auto phrases = fixtures::read_lines(fixtures::path("fixtures/safety_positive.txt"));
  REQUIRE(filter.size() == 50);
  REQUIRE(phrases.size() == 50);
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    INFO(phrases[i]);
    CHECK(filter.pattern_matches(i, phrases[i]));
    CHECK(!filter.check(phrases[i]).allowed);
  }
}

TEST_CASE("benign sentences pass")
{
  const auto filter = SafetyFilter::shipped();
  const auto lines = fixtures::read_lines(fixtures::path("fixtures/safety_benign.txt"));
  REQUIRE(lines.size() == 200);
  for (const auto& l : lines) {
    INFO(l);
    CHECK(filter.check(l).allowed);
  }
}

TEST_CASE("safety examples")
{
  const auto filter = SafetyFilter::shipped();
  const auto v = filter.check("sometimes I wish to die");
  CHECK(!v.allowed);
  CHECK(v.matched_pattern == "wish to die");
  CHECK(filter.check("I can keep trying").allowed);
  CHECK(!filter.check("HARM MYSELF").allowed);
  CHECK(expect::error_code([] { SafetyFilter::parse("ok\n(unclosed\n"); }) == ErrorCode::InvalidInput);
  CHECK(SafetyFilter::parse("# only a comment\n\n").size() == 0);
}

TEST_CASE("completion cleaning")
{
  CHECK(clean_completion("\n \"A reframe.\"\n\nSecond") == "A reframe.");
  CHECK(clean_completion("   \n\n ") == "");
}

TEST_CASE("generate_reframe uses top-5 retrieval and top-p 0.6")
{
  const auto snap = small_snapshot();
  std::vector<CompletionRequest> seen;
  const auto p = providers::MockCompletionProvider([&seen](const CompletionRequest& req, int) {
    seen.push_back(req);
    return CompletionChoice{" I can learn from this feedback.", {}};
  });
  const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
  const auto c = gen.generate_reframe(kRecord);
  CHECK(c.text() == "I can learn from this feedback.");
  CHECK(c.variant() == Variant::base());
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].top_p == 0.6);

  const auto assembly = gen.generation_prompt(kRecord);
  const auto retrieved = dataset::retrieve_similar(snap, embedder(), kRecord, 5);
  REQUIRE(assembly.example_ids.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(assembly.example_ids[i] == retrieved[i].entry_id);
  CHECK(assembly.rendered == seen[0].prompt);
  // Examples appear in rank order, then the query.
  std::size_t pos = 0;
  for (const auto& id : assembly.example_ids) {
    const auto& e = snap.entry(*snap.index_of(id));
    const auto at = assembly.rendered.find(e.record.thought(), pos);
    REQUIRE(at != std::string::npos);
    pos = at;
  }
  CHECK(assembly.rendered.rfind(kRecord.thought()) > pos);
}

TEST_CASE("selected traps are passed to the generation prompt")
{
  const auto snap = small_snapshot();
  const auto p = echo_provider();
  const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
  const auto with = gen.generation_prompt(kRecord, {ThinkingTrap::Overgeneralizing}).rendered;
  CHECK(with.find("Overgeneralizing") != std::string::npos);
  CHECK(with != gen.generation_prompt(kRecord).rendered);
}

TEST_CASE("safety resampling")
{
  const auto snap = small_snapshot();
  SUBCASE("blocked three times")
  {
    int calls = 0;
    const auto p = providers::MockCompletionProvider([&calls](const CompletionRequest&, int) {
      ++calls;
      return CompletionChoice{" I wish to die.", {}};
    });
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    CHECK(expect::error_code([&] { gen.generate_reframe(kRecord); }) == ErrorCode::SafetyExhausted);
    CHECK(calls == 3);
  }
  SUBCASE("blocked twice then allowed")
  {
    int calls = 0;
    const auto p = providers::MockCompletionProvider([&calls](const CompletionRequest&, int) {
      return CompletionChoice{++calls < 3 ? " I wish to die." : " I can rest tonight.", {}};
    });
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    CHECK(gen.generate_reframe(kRecord).text() == "I can rest tonight.");
  }
  SUBCASE("empty completion")
  {
    const auto p = providers::MockCompletionProvider([](const CompletionRequest&, int) { return CompletionChoice{"\n\n", {}}; });
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    CHECK(expect::error_code([&] { gen.generate_reframe(kRecord); }) == ErrorCode::EmptyCompletion);
  }
}

TEST_CASE("trap variants")
{
  const auto p = echo_provider();
  SUBCASE("both pools large enough")
  {
    const auto snap = dataset::DatasetSnapshot::build(trap_pool_entries(10, 10), embedder());
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    const auto [yes, no] = gen.generate_trap_variants(kRecord);
    CHECK(yes.variant() == Variant::trap_addressed());
    CHECK(no.variant() == Variant::trap_not_addressed());
    CHECK(yes.text() != no.text());
    const auto yes_prompt = gen.trap_prompt(kRecord, true);
    const auto no_prompt = gen.trap_prompt(kRecord, false);
    for (const auto& id : no_prompt.example_ids) CHECK(snap.entry(*snap.index_of(id)).traps_b.empty());
    CHECK(yes_prompt.example_ids.size() == 5);
  }
  SUBCASE("too few non-addressing entries")
  {
    const auto snap = dataset::DatasetSnapshot::build(trap_pool_entries(17, 3), embedder());
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    try {
      gen.generate_trap_variants(kRecord);
      FAIL("expected PoolTooSmall");
    }
    catch (const PoolTooSmallError& e) {
      CHECK(e.code() == ErrorCode::PoolTooSmall);
      CHECK(e.pool() == "no");
      CHECK(e.size() == 3);
    }
  }
}

TEST_CASE("rewrite_attribute")
{
  const auto snap = small_snapshot();
  const auto p = echo_provider();
  const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
  const ReframeCandidate base("I can ask for feedback.", Variant::base());
  CHECK(gen.rewrite_attribute(base, AttributeKind::Empathy, Direction::High).variant() ==
        Variant::high(AttributeKind::Empathy));
  CHECK(gen.rewrite_attribute(base, AttributeKind::Empathy, Direction::Low, &kRecord).variant() ==
        Variant::low(AttributeKind::Empathy));
  CHECK(expect::error_code([&] { gen.rewrite_attribute(base, AttributeKind::AddressesTraps, Direction::High); }) ==
        ErrorCode::InvalidInput);

  SUBCASE("demonstrations are ordered by direction")
  {
    const auto pairs = gen.rewrite_pairs(AttributeKind::Positivity, &kRecord);
    REQUIRE(pairs.size() == 5);
    const auto up = gen.rewrite_prompt("base", AttributeKind::Positivity, Direction::High, &kRecord).rendered;
    const auto down = gen.rewrite_prompt("base", AttributeKind::Positivity, Direction::Low, &kRecord).rendered;
    for (const auto& pr : pairs) {
      const auto& e = snap.entry(*snap.index_of(pr.entry_id));
      CHECK(pr.high_text == e.reframe(e.comparisons.at(AttributeKind::Positivity)));
      CHECK(up.find(pr.low_text) < up.find(pr.high_text));
      CHECK(down.find(pr.high_text) < down.find(pr.low_text));
    }
    CHECK(up.find("more positive") != std::string::npos);
    CHECK(down.find("less positive") != std::string::npos);
  }
  SUBCASE("pairs without an origin are a seeded sample")
  {
    const auto a = gen.rewrite_pairs(AttributeKind::Specificity, nullptr);
    const auto b = gen.rewrite_pairs(AttributeKind::Specificity, nullptr);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].entry_id == b[i].entry_id);
  }
}

TEST_CASE("condition sets")
{
  const auto p = echo_provider();
  const auto snap = dataset::DatasetSnapshot::build(trap_pool_entries(30, 30), embedder());
  const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
  const auto act = gen.generate_condition_set(kRecord, AttributeKind::Actionability);
  REQUIRE(act.size() == 3);
  CHECK(act[0].variant() == Variant::low(AttributeKind::Actionability));
  CHECK(act[1].variant() == Variant::base());
  CHECK(act[2].variant() == Variant::high(AttributeKind::Actionability));
  const auto traps = gen.generate_condition_set(kRecord, AttributeKind::AddressesTraps);
  REQUIRE(traps.size() == 2);
  CHECK(traps[0].variant() == Variant::trap_not_addressed());
  CHECK(traps[1].variant() == Variant::trap_addressed());
  for (const auto& set : {act, traps}) {
    std::set<std::string> texts;
    for (const auto& c : set) texts.insert(c.text());
    CHECK(texts.size() == set.size());
  }
}

TEST_CASE("duplicate variants are regenerated, then rejected")
{
  const auto snap = small_snapshot();
  SUBCASE("always identical")
  {
    const auto p = providers::MockCompletionProvider([](const CompletionRequest&, int) {
      return CompletionChoice{" Same text every time.", {}};
    });
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    CHECK(expect::error_code([&] { gen.generate_condition_set(kRecord, AttributeKind::Empathy); }) ==
          ErrorCode::DuplicateVariants);
  }
  SUBCASE("identical once")
  {
    std::atomic<int> calls{0};
    const auto p = providers::MockCompletionProvider([&calls](const CompletionRequest&, int) {
      const int n = calls++;
      return CompletionChoice{n < 3 ? " Same text." : " Different text " + std::to_string(n) + ".", {}};
    });
    const ReframeGenerator gen(snap, p, embedder(), SafetyFilter::shipped());
    const auto set = gen.generate_condition_set(kRecord, AttributeKind::Empathy);
    CHECK(set[0].text() != set[1].text());
    CHECK(set[1].text() != set[2].text());
    CHECK(set[0].text() != set[2].text());
  }
}

TEST_CASE("no generation operation returns blocked text")
{
  // Adversarial provider: unsafe text most of the time, sometimes wrapped in
  // quotes or buried after blank lines, occasionally safe.
  const auto filter = SafetyFilter::shipped();
  const auto phrases = fixtures::read_lines(fixtures::path("fixtures/safety_positive.txt"));
  std::atomic<std::uint64_t> calls{0};
  const auto p = providers::MockCompletionProvider([&](const CompletionRequest&, int) {
    const auto n = calls++;
    const auto& bad = phrases[n % phrases.size()];
    switch (n % 5) {
      case 0: return CompletionChoice{" " + bad, {}};
      case 1: return CompletionChoice{" \"I hear you, but " + bad + ".\"", {}};
      case 2: return CompletionChoice{"\n\n" + bad + "\n\nI can rest.", {}};
      case 3: return CompletionChoice{" I can rest and " + bad + " " + std::to_string(n), {}};
      default: return CompletionChoice{" It is okay to take a break " + std::to_string(n) + ".", {}};
    }
  });
  const auto snap = dataset::DatasetSnapshot::build(trap_pool_entries(30, 30), embedder());
  const ReframeGenerator gen(snap, p, embedder(), filter);
  int produced = 0;
  int refused = 0;
  auto check_all = [&](const std::vector<ReframeCandidate>& cs) {
    for (const auto& c : cs) {
      CHECK(filter.check(c.text()).allowed);
      ++produced;
    }
  };
  for (int i = 0; i < 40; ++i) {
    try {
      switch (i % 4) {
        case 0: check_all({gen.generate_reframe(kRecord)}); break;
        case 1: {
          auto [y, n] = gen.generate_trap_variants(kRecord);
          check_all({y, n});
          break;
        }
        case 2:
          check_all({gen.rewrite_attribute(ReframeCandidate("I can rest.", Variant::base()),
                                           kComparableAttributes[static_cast<std::size_t>(i) % 6], Direction::High)});
          break;
        default:
          check_all(gen.generate_condition_set(kRecord, kAllAttributes[static_cast<std::size_t>(i) % 7]));
          break;
      }
    }
    catch (const Error& e) {
      CHECK((e.code() == ErrorCode::SafetyExhausted || e.code() == ErrorCode::DuplicateVariants));
      ++refused;
    }
  }
  CHECK(produced > 0);
  CHECK(refused > 0);
}

TEST_CASE("golden prompts")
{
  const auto prompts = fixtures::golden_prompts();
  CHECK(prompts.size() == 15);
  const auto again = fixtures::golden_prompts();
  for (std::size_t i = 0; i < prompts.size(); ++i) CHECK(prompts[i] == again[i]);
  const auto result = fixtures::check_golden(prompts);
  for (const auto& m : result.mismatched) INFO("drift: " << m);
  CHECK(result.ok);
}
