#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadlab {

enum class ErrorCode {
  InvalidArgument,
  RankDeficient,
  StructuralMismatch,
  DegenerateForm,
  AllZeroAxis,
  DepthTooLarge,
  UnassignedAtom,
  PreconditionFail,
  TripleBudgetExceeded,
  BudgetExceeded,
  FiberTooClose,
  DeltaTooLarge,
  NonPositiveValue,
  InsufficientData,
  DegeneratePolynomial,
  IoFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

//! Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace quadlab
