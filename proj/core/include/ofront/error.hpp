#pragma once

#include <stdexcept>
#include <string>

namespace ofront {

enum class ErrorCode {
  NotCoprime,
  ZeroDirection,
  DirectionOutOfRange,
  InvalidGrid,
  NewtonDiverged,
  PinnedWave,
  NonMonotone,
  SingularLinearSystem,
  ContinuationStall,
  QuadratureUnderResolved,
  DispersionRangeExceeded,
  StepSizeTooLarge,
  NonPositiveField,
  WindowTooSmall,
  WindowTooNarrow,
  BlowUp,
  NoBracket,
  MultipleBrackets,
  OutOfProfileRange,
  ScheduleInvalid,
  InvalidArgument,
};

const char* error_name(ErrorCode code);

// Process exit code for the command line driver: 10-19 solver, 20-29 simulation.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ofront
