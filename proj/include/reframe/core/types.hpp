#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reframe/core/attributes.hpp"
#include "reframe/core/traps.hpp"

namespace reframe {

inline constexpr std::size_t kMaxFieldLength = 2000;

/// A situation and the negative thought it triggered.
class ThoughtRecord {
public:
  /// Throws Error(InvalidInput) if either field is blank or longer than
  /// kMaxFieldLength characters.
  ThoughtRecord(std::string situation, std::string thought);

  [[nodiscard]] const std::string& situation() const noexcept { return situation_; }
  [[nodiscard]] const std::string& thought() const noexcept { return thought_; }

  friend bool operator==(const ThoughtRecord&, const ThoughtRecord&) = default;

private:
  std::string situation_;
  std::string thought_;
};

enum class VariantKind { Base, TrapAddressed, TrapNotAddressed, AttrHigh, AttrLow };

struct Variant {
  VariantKind kind = VariantKind::Base;
  std::optional<AttributeKind> attribute;  // set for AttrHigh / AttrLow only

  static Variant base() { return {}; }
  static Variant trap_addressed() { return {VariantKind::TrapAddressed, std::nullopt}; }
  static Variant trap_not_addressed() { return {VariantKind::TrapNotAddressed, std::nullopt}; }
  static Variant high(AttributeKind a) { return {VariantKind::AttrHigh, a}; }
  static Variant low(AttributeKind a) { return {VariantKind::AttrLow, a}; }

  friend bool operator==(const Variant&, const Variant&) = default;
};

/// Server-side label: "base", "trap_addressed", "trap_not_addressed",
/// "high:<attribute>", "low:<attribute>".
std::string variant_label(const Variant& v);
Variant parse_variant_label(std::string_view label);

class ReframeCandidate {
public:
  ReframeCandidate(std::string text, Variant variant,
                   std::optional<AttributeVector> scores = std::nullopt);

  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] const Variant& variant() const noexcept { return variant_; }
  [[nodiscard]] const std::optional<AttributeVector>& scores() const noexcept { return scores_; }

  [[nodiscard]] ReframeCandidate with_scores(AttributeVector scores) const;

private:
  std::string text_;
  Variant variant_;
  std::optional<AttributeVector> scores_;
};

enum class DatasetSource { ThoughtRecords, MHA, Synthetic };
std::string_view to_string(DatasetSource s) noexcept;
DatasetSource parse_source(std::string_view s);

enum class Choice { A, B };

struct DatasetEntry {
  std::string id;
  DatasetSource source = DatasetSource::Synthetic;
  ThoughtRecord record;
  std::string reframe_a;
  std::string reframe_b;
  TrapSet traps_a;
  TrapSet traps_b;
  std::map<AttributeKind, Choice> comparisons;

  [[nodiscard]] const std::string& reframe(Choice c) const { return c == Choice::A ? reframe_a : reframe_b; }
  [[nodiscard]] const TrapSet& traps(Choice c) const { return c == Choice::A ? traps_a : traps_b; }
};

enum class ViolationKind {
  EmptyId,
  EmptyReframe,
  DuplicateReframes,
  MissingComparison,
  UnexpectedComparison,
  DuplicateId,  // dataset-level: id already used by an earlier entry
};

struct Violation {
  ViolationKind kind;
  std::optional<AttributeKind> attribute;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string describe(const Violation& v);

/// Empty iff every DatasetEntry invariant holds.
std::vector<Violation> validate_entry(const DatasetEntry& entry);

}  // namespace reframe
