#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgc {

enum class ErrorKind {
  InvalidInput,
  FieldMismatch,
  AmbiguousFloor,
  Unbounded,
  DegenerateFace,
  IrrationalSubspace,
  OnBoundary,
  UndecidableMembership,
  NoCutNeeded,
  BudgetExhausted,
  NotAFace,
  CutInvalidOnFace,
  CertificateFailure,
  DimensionTooLarge,
  NotPlottable,
};

std::string_view to_string(ErrorKind kind);

// Domain error carrying the module error name; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cgc
