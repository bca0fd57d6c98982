#include "reframe/core/serialization.hpp"

#include "reframe/core/error.hpp"

namespace reframe {

using nlohmann::json;

json traps_to_json(const TrapSet& traps)
{
  json arr = json::array();
  for (const auto t : traps) arr.push_back(std::string(canonical_name(t)));
  return arr;
}

TrapSet traps_from_json(const json& j)
{
  TrapSet out;
  for (const auto& item : j) out.insert(parse_trap(item.get<std::string>()));
  return out;
}

json to_json(const AttributeVector& v)
{
  json j = json::object();
  if (v.traps_addressed()) j["addresses_traps"] = traps_to_json(*v.traps_addressed());
  for (const auto a : kComparableAttributes) {
    if (const auto s = v.scalar(a)) j[std::string(attribute_key(a))] = *s;
  }
  return j;
}

AttributeVector attribute_vector_from_json(const json& j)
{
  AttributeVector v;
  if (j.contains("addresses_traps")) v.set_traps_addressed(traps_from_json(j.at("addresses_traps")));
  if (j.contains("rationality")) v.set_rationality(j.at("rationality").get<double>());
  if (j.contains("positivity")) v.set_positivity(j.at("positivity").get<double>());
  if (j.contains("empathy")) v.set_empathy(j.at("empathy").get<double>());
  if (j.contains("actionability")) v.set_actionability(j.at("actionability").get<double>());
  if (j.contains("specificity")) v.set_specificity(j.at("specificity").get<double>());
  if (j.contains("readability")) v.set_readability(j.at("readability").get<double>());
  return v;
}

json to_json(const DatasetEntry& e)
{
  json comparisons = json::object();
  for (const auto& [attr, choice] : e.comparisons) {
    comparisons[std::string(attribute_key(attr))] = choice == Choice::A ? "A" : "B";
  }
  return json{{"id", e.id},
              {"source", std::string(to_string(e.source))},
              {"situation", e.record.situation()},
              {"thought", e.record.thought()},
              {"reframe_a", e.reframe_a},
              {"reframe_b", e.reframe_b},
              {"traps_a", traps_to_json(e.traps_a)},
              {"traps_b", traps_to_json(e.traps_b)},
              {"comparisons", comparisons}};
}

DatasetEntry dataset_entry_from_json(const json& j)
{
  static constexpr const char* kFields[] = {"id",        "source",    "situation",
                                            "thought",   "reframe_a", "reframe_b",
                                            "traps_a",   "traps_b",   "comparisons"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "dataset line is not a JSON object");
  for (const char* f : kFields) {
    if (!j.contains(f)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + f + "'");
  }
  if (j.size() != std::size(kFields)) {
    throw Error(ErrorCode::InvalidInput, "unexpected extra fields in dataset line");
  }
  DatasetEntry e{
      .id = j.at("id").get<std::string>(),
      .source = parse_source(j.at("source").get<std::string>()),
      .record = ThoughtRecord(j.at("situation").get<std::string>(), j.at("thought").get<std::string>()),
      .reframe_a = j.at("reframe_a").get<std::string>(),
      .reframe_b = j.at("reframe_b").get<std::string>(),
      .traps_a = traps_from_json(j.at("traps_a")),
      .traps_b = traps_from_json(j.at("traps_b")),
      .comparisons = {},
  };
  for (const auto& [key, value] : j.at("comparisons").items()) {
    const auto choice = value.get<std::string>();
    if (choice != "A" && choice != "B") {
      throw Error(ErrorCode::InvalidInput, "comparison '" + key + "' must be \"A\" or \"B\"");
    }
    e.comparisons[parse_attribute(key)] = choice == "A" ? Choice::A : Choice::B;
  }
  return e;
}

}  // namespace reframe
