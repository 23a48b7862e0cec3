#pragma once

#include <stdexcept>
#include <string>

namespace sr {

// Error classes mirror the failure modes of the public API. The numeric
// values double as CLI exit codes.
enum class ErrorCode {
  Io = 2,
  Format = 3,
  InvalidArgument = 4,
  Data = 5,
  ShapeMismatch = 6,
  Provenance = 7,
  ImageTooSmall = 8,
  Domain = 9,
  DegenerateBatch = 10,
  MissingGradient = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Format: return "FormatError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Data: return "DataError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Provenance: return "ProvenanceError";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::DegenerateBatch: return "DegenerateBatch";
    case ErrorCode::MissingGradient: return "MissingGradient";
  }
  return "Error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

}  // namespace sr
