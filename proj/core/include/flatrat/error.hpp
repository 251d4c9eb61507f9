#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flatrat {

enum class ErrorKind {
  SingularMatrix,
  ZeroMatrix,
  NotInGL2Z,
  NotInSubgroup,
  NotAnExtension,
  ResourceLimit,
  ParseError,
  InvalidInput,
  Unsupported,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a configured budget (automaton states, BFS nodes, oracle
/// frontier) is exhausted. Callers map this to a distinct exit status.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error(ErrorKind::ResourceLimit, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorKind::ParseError, what + " at line " + std::to_string(line) +
                                         ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Budgets shared by the decision procedures. Defaults are sized for
/// desk-scale instances.
struct Limits {
  std::size_t max_states = 1'000'000;        // automaton states per construction
  std::size_t max_coset_reps = 0;            // 0: derive from SL(2,Z/qZ)
  std::size_t max_oracle_products = 2'000'000;
};

}  // namespace flatrat
