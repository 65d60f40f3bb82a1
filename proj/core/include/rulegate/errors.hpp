#pragma once

#include <stdexcept>
#include <string>

namespace rulegate {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (CSV, schema sidecar, ASP program text).
class parse_error : public error {
 public:
  parse_error(const std::string& msg, int line = 0, int column = 0)
      : error(format(msg, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    if (line <= 0) return msg;
    return msg + " (line " + std::to_string(line) + ", column " +
           std::to_string(column) + ")";
  }
  int line_;
  int column_;
};

class schema_error : public error {
 public:
  using error::error;
};

// Label column does not carry exactly two distinct values.
class arity_error : public error {
 public:
  using error::error;
};

class unusable_column_error : public error {
 public:
  using error::error;
};

// Predicate dependency graph has a cycle through negation.
class stratification_error : public error {
 public:
  using error::error;
};

// Rule variable not bound by any positive body atom.
class safety_error : public error {
 public:
  using error::error;
};

// Numeric value not representable as an integer at the requested scale.
class scale_error : public error {
 public:
  using error::error;
};

class unknown_goal_error : public error {
 public:
  using error::error;
};

class degenerate_model_error : public error {
 public:
  using error::error;
};

// Caller violated an operation precondition.
class contract_error : public error {
 public:
  using error::error;
};

}  // namespace rulegate
