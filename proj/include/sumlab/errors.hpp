#pragma once

#include <stdexcept>
#include <string>

namespace sumlab {

/// Base class for every error the library raises. `exit_code()` is the
/// process status the CLI maps the error to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 5; }
};

/// Requested scale is incompatible with a depth (j > depth, coarsening up).
class ScaleError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Malformed construction input: divisibility, alignment, mismatched sources.
class ConstructionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// A target sequence or block parameter violates a named inequality.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(std::string constraint, const std::string& detail)
      : Error("admissibility: " + constraint + (detail.empty() ? "" : " (" + detail + ")")),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }
  int exit_code() const noexcept override { return 3; }

 private:
  std::string constraint_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace sumlab
