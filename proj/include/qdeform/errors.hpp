#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdeform {

enum class ErrorKind {
  ParseError,
  DivisionByZero,
  FieldMismatch,
  InvalidQuiver,
  InconsistentRelation,
  NotFiniteDimensional,
  InvalidCochain,
  UnsupportedDegree,
  NotACocycle,
  ImageConditionFailed,
  EpsilonUnresolvable,
  NormalizationFailed,
  SignResolutionFailed,
  InvalidAlgebra,
  InvalidModule,
  InvalidContext,
  NotFullIdempotent,
  CharTwoUnsupported,
  ShapeMismatch,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace qdeform
