// SPDX-License-Identifier: Apache-2.0
#include "stabcert/error.hpp"

#include <utility>

namespace stabcert {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotCoercive: return "NotCoercive";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::HalfPlaneViolation: return "HalfPlaneViolation";
    case ErrorKind::SingularKernelBlock: return "SingularKernelBlock";
    case ErrorKind::SingularReducedBlock: return "SingularReducedBlock";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::DegenerateProblem: return "DegenerateProblem";
    case ErrorKind::CertificateFailure: return "CertificateFailure";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::Underflow: return "Underflow";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::ZeroFrequency: return "ZeroFrequency";
    case ErrorKind::DegenerateShift: return "DegenerateShift";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::string which,
             std::optional<double> value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      which_(std::move(which)),
      value_(value) {}

}  // namespace stabcert
