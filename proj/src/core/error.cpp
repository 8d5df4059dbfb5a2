#include "farmvoice/core/error.hpp"

namespace fv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::UnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::NegativeDuration: return "NegativeDuration";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::SpecInfeasible: return "SpecInfeasible";
    case ErrorCode::EngineUnavailable: return "EngineUnavailable";
    case ErrorCode::InvalidCredentials: return "InvalidCredentials";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::ForbiddenForFreeForm: return "ForbiddenForFreeForm";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MissingTranscript: return "MissingTranscript";
    case ErrorCode::Pending: return "Pending";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fv
