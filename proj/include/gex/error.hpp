#pragma once

#include <stdexcept>
#include <string>

namespace gex {

enum class ErrorKind {
  DegenerateInput,
  ParallelLines,
  CoincidentCircles,
  SolverFailure,
  AmbiguousSelection,
  SyntaxError,
  UnknownFunction,
  ArityError,
  UseBeforeDef,
  EvalError,
  ConstraintViolation,
  Infeasible,
  OverConstrained,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ParallelLines: return "ParallelLines";
    case ErrorKind::CoincidentCircles: return "CoincidentCircles";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::AmbiguousSelection: return "AmbiguousSelection";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::UseBeforeDef: return "UseBeforeDef";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::OverConstrained: return "OverConstrained";
  }
  return "Unknown";
}

/// Every failure in the library is reported as a GeometryError tagged with its kind.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct SourceSpan {
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;
};

/// Parse and evaluation errors carry the source position of the offending construct.
class ScriptError : public GeometryError {
 public:
  ScriptError(ErrorKind kind, const std::string& msg, SourceSpan span)
      : GeometryError(kind, std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + msg),
        span_(span),
        message_(msg) {}

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& message() const noexcept { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

}  // namespace gex
