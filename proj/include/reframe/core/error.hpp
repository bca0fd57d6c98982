#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reframe {

enum class ErrorCode {
  UnknownTrap,
  UnknownAttribute,
  InvalidInput,
  OutOfRange,
  // provider failures
  Timeout,
  RateLimited,
  MalformedResponse,
  EndpointUnreachable,
  // dataset
  ParseError,
  ValidationError,
  EmptyDataset,
  // metrics
  FewerThanTwoActions,
  NoWords,
  AllMetricsFailed,
  // generation
  SafetyExhausted,
  EmptyCompletion,
  PoolTooSmall,
  NoRewritePairs,
  DuplicateVariants,
  // statistics
  DegenerateInput,
  NoCompleteTrials,
  InsufficientData,
  // experiment / service
  InvalidEvent,
  StorageFailure,
  PhaseViolation,
  ConsentRequired,
  SessionNotFound,
  SessionClosed,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace reframe
