#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cone {

/// Non-finite or out-of-range input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested accuracy not reached within the configured work limits.
/// Carries the best estimate obtained so far.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, std::complex<double> best, double err)
      : std::runtime_error(what), best_estimate(best), error_estimate(err) {}

  std::complex<double> best_estimate;
  double error_estimate;
};

/// No admissible integration contour could be constructed.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The query lies on the interface, where the large-x expansions are not valid.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cone
