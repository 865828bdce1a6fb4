#pragma once

#include <stdexcept>
#include <string>

namespace recourse {

/// Machine-readable error category, surfaced as `error.code` by the service
/// and mapped to exit statuses by the CLI.
enum class ErrorCode {
  parse,              // syntax error in a rule file or query
  inadmissible,       // recursion / range-restriction violation
  schema,             // malformed schema or dataset
  out_of_domain,      // instance value outside its feature domain
  unknown_feature,
  undeclared_feature, // program mentions a feature missing from the schema
  unsupported_clause, // dual would need universal quantification
  kind_mismatch,      // ordering comparison on symbols
  undefined_predicate,
  store_overflow,
  infeasible,
  partial_instance,
  already_desired,
  control_conflict,
  no_mutable_feature,
  arity_mismatch,
  io,
  usage,
  internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace recourse
