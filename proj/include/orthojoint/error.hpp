#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthojoint {

enum class ErrorCode {
  ShapeMismatch,
  EmptyClass,
  SingleGender,
  InvalidLabel,
  InvalidConfig,
  DimMismatch,
  NoConvergence,
  DegenerateMeans,
  ZeroVector,
  EmptyInput,
  InsufficientSamples,
  ParseError,
  MissingColumn,
  IoError,
  FormatError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orthojoint
