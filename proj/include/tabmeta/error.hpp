#pragma once

#include <stdexcept>
#include <string>

namespace tabmeta {

enum class ErrorCode {
  MissingColumn,
  TypeMismatch,
  EmptyTable,
  TooFewInstances,
  DimensionMismatch,
  ShapeMismatch,
  EmptyContext,
  EmptyCorpus,
  ContextTooSmall,
  CorruptCheckpoint,
  LengthMismatch,
  ConfigError,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::ContextTooSmall: return "ContextTooSmall";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

  // Exit-code classification used by the CLI: config/usage problems vs. bad data.
  bool is_data_error() const {
    switch (code_) {
      case ErrorCode::MissingColumn:
      case ErrorCode::TypeMismatch:
      case ErrorCode::EmptyTable:
      case ErrorCode::TooFewInstances:
      case ErrorCode::EmptyContext:
      case ErrorCode::ContextTooSmall:
      case ErrorCode::CorruptCheckpoint:
      case ErrorCode::IoError:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace tabmeta
