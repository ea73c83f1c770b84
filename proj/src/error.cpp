#include "iptt/error.hpp"

namespace iptt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::SpectrumNotInDisk: return "SpectrumNotInDisk";
    case ErrorKind::OutsideDisk: return "OutsideDisk";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotProbability: return "NotProbability";
    case ErrorKind::BadBounds: return "BadBounds";
    case ErrorKind::BadExponents: return "BadExponents";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace iptt
