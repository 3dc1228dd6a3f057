#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridpos {

enum class Errc {
  EmptyInput,
  DimensionMismatch,
  ArithmeticOverflow,
  WrongArity,
  DuplicatePoints,
  OutOfRange,
  ArityTooLarge,
  SumMismatch,
  BudgetExceeded,
  OddKInPairMode,
  ZeroEdges,
  TauOutOfRange,
  VacuousConstraint,
  InvalidConfig,
  HypothesisViolated,
  NotPrime,
  ProbabilityOutOfRange,
  LengthMismatch,
  NotASolution,
  NonBijectiveSigma,
  ParseError,
  InvariantViolation,
};

std::string_view to_string(Errc code) noexcept;

// Every library failure is reported through this type; code() identifies the
// contract that was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

// Internal consistency checks that encode theorems; a failure is a bug.
inline void ensure(bool condition, const char* what) {
  if (!condition) fail(Errc::InvariantViolation, what);
}

}  // namespace gridpos
