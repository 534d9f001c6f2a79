#include "ladderops/error.hpp"

namespace lop {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::BadSupportPoint: return "BadSupportPoint";
    case ErrorCode::InvalidAtom: return "InvalidAtom";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::ZOnSupport: return "ZOnSupport";
    case ErrorCode::BadNodeCount: return "BadNodeCount";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
  }
  return "UnknownError";
}

bool is_numerical(ErrorCode code) {
  return code == ErrorCode::EvaluationFailure || code == ErrorCode::PrecisionExhausted ||
         code == ErrorCode::StepTooLarge;
}

}  // namespace lop
