#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace harmonics {

enum class ErrorKind {
  Asymmetric,
  NegativeWeight,
  NonZeroDiagonal,
  Disconnected,
  DimensionMismatch,
  OutOfRange,
  NonFinite,
  NotOnManifold,
  NotTangent,
  EigenSolverFailure,
  SvdFailure,
  StepFailure,
  EmptyInput,
  InsufficientSamples,
  ZeroVariance,
  MissingGroup,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace harmonics
