#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fv {

enum class ErrorCode {
  // core-domain
  EmptyAudio,
  UnsupportedLanguage,
  NegativeDuration,
  DuplicateId,
  InvalidArgument,
  // metrics
  EmptyReference,
  InsufficientData,
  InsufficientPairs,
  MissingBaseline,
  // stt / nlp adapters
  SpecInfeasible,
  EngineUnavailable,
  // service
  InvalidCredentials,
  Unauthorized,
  Forbidden,
  ForbiddenForFreeForm,
  NotFound,
  PayloadTooLarge,
  ValidationError,
  MissingTranscript,
  Pending,
  // plumbing
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain failure carrying a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fv
