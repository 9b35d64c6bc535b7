#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qoco {

enum class ErrorCode {
  DimensionMismatch,
  ConeMismatch,
  BadSparseStructure,
  EmptyCone,
  IndexOutOfRange,
  BadPermutation,
  NotInterior,
  NumericalError,
  UnknownAlgebra,
  NotSetUp,
  EmptyInput,
  ParseError,
  IoError,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qoco
