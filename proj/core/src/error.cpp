#include "gridpos/error.hpp"

namespace gridpos {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ArithmeticOverflow: return "ArithmeticOverflow";
    case Errc::WrongArity: return "WrongArity";
    case Errc::DuplicatePoints: return "DuplicatePoints";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ArityTooLarge: return "ArityTooLarge";
    case Errc::SumMismatch: return "SumMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::OddKInPairMode: return "OddKInPairMode";
    case Errc::ZeroEdges: return "ZeroEdges";
    case Errc::TauOutOfRange: return "TauOutOfRange";
    case Errc::VacuousConstraint: return "VacuousConstraint";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::NotPrime: return "NotPrime";
    case Errc::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotASolution: return "NotASolution";
    case Errc::NonBijectiveSigma: return "NonBijectiveSigma";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace gridpos
