#include "reframe/core/types.hpp"

#include "reframe/core/error.hpp"
#include "reframe/core/text.hpp"

namespace reframe {
namespace {

std::size_t utf8_length(std::string_view s) noexcept
{
  std::size_t n = 0;
  for (const char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

void check_field(std::string_view value, std::string_view field)
{
  if (text::trim(value).empty()) {
    throw Error(ErrorCode::InvalidInput, std::string(field) + " must not be empty");
  }
  if (utf8_length(value) > kMaxFieldLength) {
    throw Error(ErrorCode::InvalidInput, std::string(field) + " exceeds " +
                                             std::to_string(kMaxFieldLength) + " characters");
  }
}

}  // namespace

ThoughtRecord::ThoughtRecord(std::string situation, std::string thought)
    : situation_(std::move(situation)), thought_(std::move(thought))
{
  check_field(situation_, "situation");
  check_field(thought_, "thought");
}

std::string variant_label(const Variant& v)
{
  switch (v.kind) {
    case VariantKind::Base: return "base";
    case VariantKind::TrapAddressed: return "trap_addressed";
    case VariantKind::TrapNotAddressed: return "trap_not_addressed";
    case VariantKind::AttrHigh: return "high:" + std::string(attribute_key(*v.attribute));
    case VariantKind::AttrLow: return "low:" + std::string(attribute_key(*v.attribute));
  }
  return "unknown";
}

Variant parse_variant_label(std::string_view label)
{
  if (label == "base") return Variant::base();
  if (label == "trap_addressed") return Variant::trap_addressed();
  if (label == "trap_not_addressed") return Variant::trap_not_addressed();
  if (label.starts_with("high:")) return Variant::high(parse_attribute(label.substr(5)));
  if (label.starts_with("low:")) return Variant::low(parse_attribute(label.substr(4)));
  throw Error(ErrorCode::InvalidInput, "unknown variant label: '" + std::string(label) + "'");
}

ReframeCandidate::ReframeCandidate(std::string text, Variant variant,
                                   std::optional<AttributeVector> scores)
    : text_(std::move(text)), variant_(variant), scores_(std::move(scores))
{
  if (text::trim(text_).empty()) {
    throw Error(ErrorCode::InvalidInput, "reframe text must not be empty");
  }
  const bool attr_variant =
      variant_.kind == VariantKind::AttrHigh || variant_.kind == VariantKind::AttrLow;
  if (attr_variant != variant_.attribute.has_value()) {
    throw Error(ErrorCode::InvalidInput, "attribute must be set exactly for high/low variants");
  }
  if (attr_variant && !is_comparable(*variant_.attribute)) {
    throw Error(ErrorCode::InvalidInput, "high/low variants need a comparable attribute");
  }
}

ReframeCandidate ReframeCandidate::with_scores(AttributeVector scores) const
{
  return ReframeCandidate(text_, variant_, std::move(scores));
}

std::string_view to_string(DatasetSource s) noexcept
{
  switch (s) {
    case DatasetSource::ThoughtRecords: return "thought_records";
    case DatasetSource::MHA: return "mha";
    case DatasetSource::Synthetic: return "synthetic";
  }
  return "unknown";
}

DatasetSource parse_source(std::string_view s)
{
  for (const auto src : {DatasetSource::ThoughtRecords, DatasetSource::MHA, DatasetSource::Synthetic}) {
    if (text::iequals(s, to_string(src))) return src;
  }
  throw Error(ErrorCode::InvalidInput, "unknown dataset source: '" + std::string(s) + "'");
}

std::string describe(const Violation& v)
{
  switch (v.kind) {
    case ViolationKind::EmptyId: return "EmptyId";
    case ViolationKind::EmptyReframe: return "EmptyReframe";
    case ViolationKind::DuplicateReframes: return "DuplicateReframes";
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::MissingComparison:
      return "MissingComparison(" + std::string(attribute_key(*v.attribute)) + ")";
    case ViolationKind::UnexpectedComparison:
      return "UnexpectedComparison(" + std::string(attribute_key(*v.attribute)) + ")";
  }
  return "Unknown";
}

std::vector<Violation> validate_entry(const DatasetEntry& entry)
{
  std::vector<Violation> out;
  if (text::trim(entry.id).empty()) out.push_back({ViolationKind::EmptyId, std::nullopt});
  if (text::trim(entry.reframe_a).empty() || text::trim(entry.reframe_b).empty()) {
    out.push_back({ViolationKind::EmptyReframe, std::nullopt});
  }
  else if (entry.reframe_a == entry.reframe_b) {
    out.push_back({ViolationKind::DuplicateReframes, std::nullopt});
  }
  for (const auto a : kComparableAttributes) {
    if (!entry.comparisons.contains(a)) out.push_back({ViolationKind::MissingComparison, a});
  }
  if (entry.comparisons.contains(AttributeKind::AddressesTraps)) {
    out.push_back({ViolationKind::UnexpectedComparison, AttributeKind::AddressesTraps});
  }
  return out;
}

}  // namespace reframe
