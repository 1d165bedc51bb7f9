#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpurify {

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  TraceNotOne,
  NotFinite,
  NotNormalized,
  DegenerateBasis,
  DimensionMismatch,
  NotWClass,
  RankDeficientPeel,
  InvalidParameters,
  InvalidForm,
  OutputNotRankOne,
  ProbabilityMismatch,
  NotMaximallyEntangled,
  ProductState,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Verification failures that indicate a bug rather than bad input.
inline bool is_internal_failure(ErrorCode code) {
  return code == ErrorCode::OutputNotRankOne || code == ErrorCode::ProbabilityMismatch ||
         code == ErrorCode::NotMaximallyEntangled || code == ErrorCode::RankDeficientPeel;
}

}  // namespace qpurify
