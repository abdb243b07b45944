#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace domsift {

enum class ErrorCode {
  EmptyInput,
  IllegalCharacter,
  InvalidDate,
  InvalidRange,
  FileNotFound,
  SchemaMismatch,
  Timeout,
  ConnectionRefused,
  NoServerForTld,
  RateLimited,
  NetworkDisabled,
  LengthMismatch,
  TooFewSamples,
  ConstantColumn,
  EmptyData,
  NonFiniteLoss,
  EmptyTrainSet,
  EmptyVotes,
  FeatureDimensionMismatch,
  VersionMismatch,
  CorruptPayload,
  ClassTooSmall,
  EmptyCounts,
  SingleClass,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::InvalidDate: return "InvalidDate";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ConnectionRefused: return "ConnectionRefused";
    case ErrorCode::NoServerForTld: return "NoServerForTld";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::NetworkDisabled: return "NetworkDisabled";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::EmptyVotes: return "EmptyVotes";
    case ErrorCode::FeatureDimensionMismatch: return "FeatureDimensionMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace domsift
