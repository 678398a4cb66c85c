#pragma once

#include <stdexcept>
#include <string>

namespace pntomo {

/// Bad parameters or inputs that fail validation (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested Fock cutoff cannot hold the state to the required accuracy.
class TruncationError : public ValidationError {
 public:
  TruncationError(const std::string& what, int required_dim)
      : ValidationError(what), required_dim_(required_dim) {}

  int required_dim() const { return required_dim_; }

 private:
  int required_dim_;
};

/// An iterative internal sum failed to settle (CLI exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pntomo
