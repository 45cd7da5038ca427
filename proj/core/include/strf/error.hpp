#pragma once

#include <stdexcept>
#include <string>

namespace strf {

enum class ErrorKind { validation, numerical, consistency, capacity };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad parameters or a request outside an operation's domain.
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorKind::validation, w) {}
};

// Quadrature, eigensolver or Monte Carlo accuracy failure.
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::numerical, w) {}
};

// Two routes to the same quantity disagree.
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& w) : Error(ErrorKind::consistency, w) {}
};

struct CapacityError : Error {
  explicit CapacityError(const std::string& w) : Error(ErrorKind::capacity, w) {}
};

// Process exit code for the command line tool.
int exit_code(ErrorKind kind) noexcept;

const char* kind_name(ErrorKind kind) noexcept;

}  // namespace strf
