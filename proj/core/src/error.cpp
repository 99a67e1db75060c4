#include "ofront/error.hpp"

namespace ofront {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::DirectionOutOfRange: return "DirectionOutOfRange";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::PinnedWave: return "PinnedWave";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorCode::ContinuationStall: return "ContinuationStall";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::DispersionRangeExceeded: return "DispersionRangeExceeded";
    case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorCode::NonPositiveField: return "NonPositiveField";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::MultipleBrackets: return "MultipleBrackets";
    case ErrorCode::OutOfProfileRange: return "OutOfProfileRange";
    case ErrorCode::ScheduleInvalid: return "ScheduleInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotCoprime: return 10;
    case ErrorCode::ZeroDirection: return 11;
    case ErrorCode::DirectionOutOfRange: return 11;
    case ErrorCode::InvalidGrid: return 12;
    case ErrorCode::NewtonDiverged: return 13;
    case ErrorCode::PinnedWave: return 14;
    case ErrorCode::NonMonotone: return 15;
    case ErrorCode::SingularLinearSystem: return 16;
    case ErrorCode::ContinuationStall: return 17;
    case ErrorCode::QuadratureUnderResolved: return 18;
    case ErrorCode::DispersionRangeExceeded: return 19;
    case ErrorCode::InvalidArgument: return 19;
    case ErrorCode::StepSizeTooLarge: return 20;
    case ErrorCode::NonPositiveField: return 21;
    case ErrorCode::WindowTooSmall: return 22;
    case ErrorCode::WindowTooNarrow: return 23;
    case ErrorCode::BlowUp: return 24;
    case ErrorCode::NoBracket: return 25;
    case ErrorCode::MultipleBrackets: return 26;
    case ErrorCode::OutOfProfileRange: return 27;
    case ErrorCode::ScheduleInvalid: return 28;
  }
  return 19;
}

}  // namespace ofront
