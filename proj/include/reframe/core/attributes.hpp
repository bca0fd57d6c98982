#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "reframe/core/traps.hpp"

namespace reframe {

enum class AttributeKind : std::uint8_t {
  AddressesTraps,
  Rationality,
  Positivity,
  Empathy,
  Actionability,
  Specificity,
  Readability,
};

inline constexpr std::array<AttributeKind, 7> kAllAttributes{
    AttributeKind::AddressesTraps, AttributeKind::Rationality,
    AttributeKind::Positivity,     AttributeKind::Empathy,
    AttributeKind::Actionability,  AttributeKind::Specificity,
    AttributeKind::Readability,
};

/// The attributes annotators compared pairwise; everything but trap addressing.
inline constexpr std::array<AttributeKind, 6> kComparableAttributes{
    AttributeKind::Rationality,   AttributeKind::Positivity,
    AttributeKind::Empathy,       AttributeKind::Actionability,
    AttributeKind::Specificity,   AttributeKind::Readability,
};

constexpr bool is_comparable(AttributeKind a) noexcept
{
  return a != AttributeKind::AddressesTraps;
}

/// snake_case key used in files and wire formats ("addresses_traps", "empathy", ...).
std::string_view attribute_key(AttributeKind a) noexcept;
/// Throws Error(UnknownAttribute).
AttributeKind parse_attribute(std::string_view key);

/// Measured values of the seven attributes. Any field may be absent when the
/// corresponding metric failed; present values are range-checked on assignment.
class AttributeVector {
public:
  static constexpr double kRationalityMin = -1.0, kRationalityMax = 1.0;
  static constexpr double kPositivityMin = 0.0, kPositivityMax = 1.0;
  static constexpr double kEmpathyMin = 0.0, kEmpathyMax = 6.0;
  static constexpr double kActionabilityMin = 0.0, kActionabilityMax = 2.0;
  static constexpr double kSpecificityMin = -1.0, kSpecificityMax = 1.0;

  AttributeVector& set_traps_addressed(TrapSet traps);
  AttributeVector& set_rationality(double v);
  AttributeVector& set_positivity(double v);
  AttributeVector& set_empathy(double v);
  AttributeVector& set_actionability(double v);
  AttributeVector& set_specificity(double v);
  AttributeVector& set_readability(double v);

  [[nodiscard]] const std::optional<TrapSet>& traps_addressed() const noexcept { return traps_; }
  [[nodiscard]] std::optional<double> rationality() const noexcept { return rationality_; }
  [[nodiscard]] std::optional<double> positivity() const noexcept { return positivity_; }
  [[nodiscard]] std::optional<double> empathy() const noexcept { return empathy_; }
  [[nodiscard]] std::optional<double> actionability() const noexcept { return actionability_; }
  [[nodiscard]] std::optional<double> specificity() const noexcept { return specificity_; }
  [[nodiscard]] std::optional<double> readability() const noexcept { return readability_; }

  /// Scalar value of a comparable attribute (nullopt when absent).
  [[nodiscard]] std::optional<double> scalar(AttributeKind a) const;
  [[nodiscard]] bool has(AttributeKind a) const;
  [[nodiscard]] bool complete() const;

  friend bool operator==(const AttributeVector&, const AttributeVector&) = default;

private:
  std::optional<TrapSet> traps_;
  std::optional<double> rationality_;
  std::optional<double> positivity_;
  std::optional<double> empathy_;
  std::optional<double> actionability_;
  std::optional<double> specificity_;
  std::optional<double> readability_;
};

}  // namespace reframe
