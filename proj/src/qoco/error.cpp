#include "qoco/error.hpp"

namespace qoco {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConeMismatch: return "ConeMismatch";
    case ErrorCode::BadSparseStructure: return "BadSparseStructure";
    case ErrorCode::EmptyCone: return "EmptyCone";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::UnknownAlgebra: return "UnknownAlgebra";
    case ErrorCode::NotSetUp: return "NotSetUp";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qoco
