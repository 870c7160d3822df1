#pragma once
// Source locations and the error taxonomy shared by all stages.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relcheck {

// Half-open byte range [begin, end) into the original source text,
// plus 1-based line/column of the start for human-readable messages.
struct Span {
  size_t begin = 0;
  size_t end = 0;
  int line = 1;
  int col = 1;

  bool operator==(const Span&) const = default;
};

enum class ErrorKind {
  Syntax,             // malformed input text
  UnsupportedConstruct, // grammar we recognize but deliberately do not handle
  Name,               // unknown identifier / duplicate definition
  Arity,              // relational arity mismatch
  Type,               // column types do not share a top-level signature
  Multiplicity,       // malformed multiplicity annotation
  Scope,              // unusable scope or bound request
  UnsupportedExpr,    // construct with no encoding in the selected backend
  Decode,             // solver model cannot be read back as an instance
  SolverNotFound,     // solver executable missing
  SolverCrashed,      // solver exited abnormally without a status
  Budget,             // enumeration or rewrite budget exhausted
  UnsupportedArity,   // relational theory tier not generated for this arity
  Internal,           // invariant violation inside relcheck itself
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, Span span = {})
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        span_(span),
        message_(std::move(message)) {}

  ErrorKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  Span span_;
  std::string message_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnsupportedConstruct: return "unsupported construct";
    case ErrorKind::Name: return "name error";
    case ErrorKind::Arity: return "arity error";
    case ErrorKind::Type: return "type error";
    case ErrorKind::Multiplicity: return "multiplicity error";
    case ErrorKind::Scope: return "scope error";
    case ErrorKind::UnsupportedExpr: return "unsupported expression";
    case ErrorKind::Decode: return "decode error";
    case ErrorKind::SolverNotFound: return "solver not found";
    case ErrorKind::SolverCrashed: return "solver crashed";
    case ErrorKind::Budget: return "budget exceeded";
    case ErrorKind::UnsupportedArity: return "unsupported arity";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

}  // namespace relcheck
