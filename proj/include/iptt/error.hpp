#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iptt {

enum class ErrorKind {
  DecompositionFailure,
  NotNormal,
  NotPSD,
  NotApplicable,
  SpectrumNotInDisk,
  OutsideDisk,
  DimensionMismatch,
  NotProbability,
  BadBounds,
  BadExponents,
  HypothesisViolated,
  ConfigInvalid,
  EmptyInput,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace iptt
