#include "reframe/core/error.hpp"

namespace reframe {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::UnknownTrap: return "UnknownTrap";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::FewerThanTwoActions: return "FewerThanTwoActions";
    case ErrorCode::NoWords: return "NoWords";
    case ErrorCode::AllMetricsFailed: return "AllMetricsFailed";
    case ErrorCode::SafetyExhausted: return "SafetyExhausted";
    case ErrorCode::EmptyCompletion: return "EmptyCompletion";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::NoRewritePairs: return "NoRewritePairs";
    case ErrorCode::DuplicateVariants: return "DuplicateVariants";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NoCompleteTrials: return "NoCompleteTrials";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidEvent: return "InvalidEvent";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::PhaseViolation: return "PhaseViolation";
    case ErrorCode::ConsentRequired: return "ConsentRequired";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::SessionClosed: return "SessionClosed";
  }
  return "Unknown";
}

}  // namespace reframe
