#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loops {

enum class ErrorCode {
  InvalidParameter,
  InvalidFormat,
  PointOnCurve,
  DegenerateLoop,
  NotSimple,
  InvalidWindow,
  WindowViolation,
  EmptyBatch,
  AllZeroWeights,
  InsufficientData,
  DegenerateDesign,
  EmptyGrid,
  TouchesFrame,
  BudgetExceeded,
  InvalidStart,
  NotAnnular,
  PreconditionFailed,
  UnknownExperiment,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace loops
