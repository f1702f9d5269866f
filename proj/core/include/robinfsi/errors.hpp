#pragma once

#include <stdexcept>
#include <string>

namespace robinfsi {

enum class ErrorCode {
  TangledMesh,
  ConnectivityMismatch,
  NotBoundary,
  Singular,
  DimensionMismatch,
  ZeroReference,
  PointNotOnInterface,
  ParseError,
  ValidationError,
};

/// All recoverable failures carry a machine-readable code plus context.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::TangledMesh: return "TANGLED_MESH";
    case ErrorCode::ConnectivityMismatch: return "CONNECTIVITY_MISMATCH";
    case ErrorCode::NotBoundary: return "NOT_BOUNDARY";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::ZeroReference: return "ZERO_REFERENCE";
    case ErrorCode::PointNotOnInterface: return "POINT_NOT_ON_INTERFACE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace robinfsi
