#pragma once

#include <stdexcept>
#include <string>

namespace lop {

enum class ErrorCode {
  ExponentOutOfRange = 1,
  NegativeWeight,
  BadSupportPoint,
  InvalidAtom,
  OutOfSupport,
  SingularPoint,
  ZOnSupport,
  BadNodeCount,
  DegreeOutOfRange,
  FamilyMismatch,
  BadConfig,
  EvaluationFailure,
  PrecisionExhausted,
  StepTooLarge,
};

const char* error_name(ErrorCode code);

// True for failures of the numerics rather than of the inputs.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace lop
