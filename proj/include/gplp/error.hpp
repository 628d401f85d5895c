#pragma once

#include <stdexcept>
#include <string>

namespace gplp {

enum class ErrorKind {
  OutOfRange,
  ConflictingLabel,
  ParseError,
  EmptyDataset,
  BadFoldCount,
  SingleClass,
  ShapeMismatch,
  IndexError,
  EmptyInput,
  NonFinite,
  NonFiniteLoss,
  IoError,
  FormatError,
  BadDegree,
  BadParameter,
  BadConfig,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ConflictingLabel: return "ConflictingLabel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::BadFoldCount: return "BadFoldCount";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::BadDegree: return "BadDegree";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures also remember the 1-based line they happened on.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason),
        line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace gplp
