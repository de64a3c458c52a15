#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ilc {

enum class ErrorKind {
  SyntaxError,
  UnboundVariable,
  TypeMismatch,
  NotAFunction,
  UnknownConstant,
  UnknownBaseType,
  ChangeTypeMismatch,
  NameClash,
  MissingConstantDerivative,
  GroupMismatch,
  FuelExhausted,
  InvalidSize,
  EmptyInput,
  DegenerateInput,
  VerificationFailed,
};

std::string_view errorKindName(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and tested against;
/// `what()` carries a human-readable message prefixed with the kind name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ilc
