#include "reframe/core/attributes.hpp"

#include <cmath>
#include <string>

#include "reframe/core/error.hpp"

namespace reframe {
namespace {

double checked(double v, double lo, double hi, std::string_view field)
{
  if (!std::isfinite(v) || v < lo || v > hi) {
    throw Error(ErrorCode::OutOfRange, std::string(field) + " value " + std::to_string(v) +
                                           " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
  return v;
}

}  // namespace

std::string_view attribute_key(AttributeKind a) noexcept
{
  switch (a) {
    case AttributeKind::AddressesTraps: return "addresses_traps";
    case AttributeKind::Rationality: return "rationality";
    case AttributeKind::Positivity: return "positivity";
    case AttributeKind::Empathy: return "empathy";
    case AttributeKind::Actionability: return "actionability";
    case AttributeKind::Specificity: return "specificity";
    case AttributeKind::Readability: return "readability";
  }
  return "unknown";
}

AttributeKind parse_attribute(std::string_view key)
{
  for (const auto a : kAllAttributes) {
    if (attribute_key(a) == key) return a;
  }
  throw Error(ErrorCode::UnknownAttribute, "unknown attribute: '" + std::string(key) + "'");
}

AttributeVector& AttributeVector::set_traps_addressed(TrapSet traps)
{
  traps_ = std::move(traps);
  return *this;
}

AttributeVector& AttributeVector::set_rationality(double v)
{
  rationality_ = checked(v, kRationalityMin, kRationalityMax, "rationality");
  return *this;
}

AttributeVector& AttributeVector::set_positivity(double v)
{
  positivity_ = checked(v, kPositivityMin, kPositivityMax, "positivity");
  return *this;
}

AttributeVector& AttributeVector::set_empathy(double v)
{
  empathy_ = checked(v, kEmpathyMin, kEmpathyMax, "empathy");
  return *this;
}

AttributeVector& AttributeVector::set_actionability(double v)
{
  actionability_ = checked(v, kActionabilityMin, kActionabilityMax, "actionability");
  return *this;
}

AttributeVector& AttributeVector::set_specificity(double v)
{
  specificity_ = checked(v, kSpecificityMin, kSpecificityMax, "specificity");
  return *this;
}

AttributeVector& AttributeVector::set_readability(double v)
{
  if (!std::isfinite(v)) throw Error(ErrorCode::OutOfRange, "readability must be finite");
  readability_ = v;
  return *this;
}

std::optional<double> AttributeVector::scalar(AttributeKind a) const
{
  switch (a) {
    case AttributeKind::Rationality: return rationality_;
    case AttributeKind::Positivity: return positivity_;
    case AttributeKind::Empathy: return empathy_;
    case AttributeKind::Actionability: return actionability_;
    case AttributeKind::Specificity: return specificity_;
    case AttributeKind::Readability: return readability_;
    case AttributeKind::AddressesTraps: break;
  }
  throw Error(ErrorCode::InvalidInput, "addresses_traps has no scalar value");
}

bool AttributeVector::has(AttributeKind a) const
{
  if (a == AttributeKind::AddressesTraps) return traps_.has_value();
  return scalar(a).has_value();
}

bool AttributeVector::complete() const
{
  for (const auto a : kAllAttributes) {
    if (!has(a)) return false;
  }
  return true;
}

}  // namespace reframe
