#include "quadlab/error.hpp"

namespace quadlab {

std::string_view to_string(ErrorCode code)
{
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::RankDeficient: return "RankDeficient";
  case ErrorCode::StructuralMismatch: return "StructuralMismatch";
  case ErrorCode::DegenerateForm: return "DegenerateForm";
  case ErrorCode::AllZeroAxis: return "AllZeroAxis";
  case ErrorCode::DepthTooLarge: return "DepthTooLarge";
  case ErrorCode::UnassignedAtom: return "UnassignedAtom";
  case ErrorCode::PreconditionFail: return "PreconditionFail";
  case ErrorCode::TripleBudgetExceeded: return "TripleBudgetExceeded";
  case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  case ErrorCode::FiberTooClose: return "FiberTooClose";
  case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
  case ErrorCode::NonPositiveValue: return "NonPositiveValue";
  case ErrorCode::InsufficientData: return "InsufficientData";
  case ErrorCode::DegeneratePolynomial: return "DegeneratePolynomial";
  case ErrorCode::IoFailure: return "IoFailure";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what)
  , code_(code)
{}

void fail(ErrorCode code, const std::string& what)
{
  throw Error(code, what);
}

} // namespace quadlab
