#pragma once

#include <stdexcept>
#include <string>

namespace mmot {

/// Input data violates a documented invariant (bad marginal, asymmetric
/// matrix, malformed file, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested computation exceeds a configured size budget (catalog
/// enumeration, oracle atom count, arrangement averaging, ...).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Floating-point trouble that must not be papered over: singular bases,
/// cycling-guard trips, residuals out of tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmot
