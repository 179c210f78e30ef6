// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stabcert {

enum class ErrorKind {
  DimensionMismatch,
  NonFinite,
  NotHermitian,
  NotCoercive,
  NotPositiveDefinite,
  InvalidTolerance,
  HalfPlaneViolation,
  SingularKernelBlock,
  SingularReducedBlock,
  RangeViolation,
  PreconditionViolation,
  ParameterOutOfRange,
  DegenerateProblem,
  CertificateFailure,
  Singular,
  TooFewSamples,
  Underflow,
  SingularBlock,
  ZeroFrequency,
  DegenerateShift,
  NotInvertible,
  GridTooLarge,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported through this type.  `which`
/// names the offending object (e.g. "alpha") and `value` carries the
/// measured quantity when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string which = {},
        std::optional<double> value = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& which() const noexcept { return which_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::string which_;
  std::optional<double> value_;
};

}  // namespace stabcert
