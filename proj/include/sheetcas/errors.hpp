#pragma once

#include <stdexcept>
#include <string>

namespace sheetcas {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance, or produced a value
/// that violates a structural bound (non-finite factorization, spectral
/// radius >= 1, ...). Carries the best available error estimate.
class NumericsError : public std::runtime_error {
 public:
  NumericsError(const std::string& what, double error_estimate = 0.0)
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Bad command-line flag or configuration entry.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sheetcas
