#pragma once

#include <stdexcept>
#include <string>

namespace expfam {

enum class ErrorCode {
  NonPositiveReference,
  DimensionMismatch,
  StateSpaceTooLarge,
  NotInNormalSpace,
  ZeroAtState,
  NotACoparallelClass,
  NoConvergence,
  EmptySet,
  PointInClosure,
  ZeroNormalSpace,
  BudgetExceeded,
  UnreachableTarget,
  InvalidPartition,
  BadGenerator,
  ZeroVector,
  NotSumZero,
  DegenerateSupport,
  UniformNotInFamily,
  NotOneDimensional,
  ShapeMismatch,
  ParseError,
  SchemaError,
};

/// All library errors are reported through this exception type; `code()`
/// identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveReference: return "NonPositiveReference";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::NotInNormalSpace: return "NotInNormalSpace";
    case ErrorCode::ZeroAtState: return "ZeroAtState";
    case ErrorCode::NotACoparallelClass: return "NotACoparallelClass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::PointInClosure: return "PointInClosure";
    case ErrorCode::ZeroNormalSpace: return "ZeroNormalSpace";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::BadGenerator: return "BadGenerator";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotSumZero: return "NotSumZero";
    case ErrorCode::DegenerateSupport: return "DegenerateSupport";
    case ErrorCode::UniformNotInFamily: return "UniformNotInFamily";
    case ErrorCode::NotOneDimensional: return "NotOneDimensional";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace expfam
