#pragma once

#include <stdexcept>
#include <string>

namespace bilinop {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  AliasingRisk,
  InvalidExponent,
  IndexOutOfRange,
  NyquistViolation,
  BadCutoffSpec,
  GridTooSmall,
  StrategyMismatch,
  NotMultiplier,
  CoverageGap,
  TruncationTooAggressive,
  Precondition,
  Io,
  Internal,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace bilinop
