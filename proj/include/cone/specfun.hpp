#pragma once

#include <complex>
#include <vector>

namespace cone {

struct SpecFunConfig {
  double rel_tol = 1e-12;
  int max_terms = 500;
  int quad_panels = 64;

  /// Throws DomainError when a field is outside its documented range.
  void validate() const;
};

// Bessel functions of real order nu >= 0 and real argument x >= 0.
//
// Accuracy: |error| <= rel_tol * max(|J|, min(1, sqrt(2 / (pi x)))). The
// second term is the oscillation envelope; near zeros of J and in the
// turning-point region only envelope-relative accuracy is meaningful.
// Where the power series is free of cancellation the result is
// rel_tol-relative.
double bessel_j(double nu, double x, const SpecFunConfig& cfg = {});

/// J_{j * step}(x) for j = 0 .. count-1, sharing one set of quadrature
/// nodes across all orders. Same accuracy contract as bessel_j.
std::vector<double> bessel_j_ladder(double x, double step, int count,
                                    const SpecFunConfig& cfg = {});

double bessel_i(double nu, double x, const SpecFunConfig& cfg = {});

/// exp(-x) * I_nu(x); finite for all x >= 0.
double bessel_i_scaled(double nu, double x, const SpecFunConfig& cfg = {});

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
std::complex<double> faddeeva_w(std::complex<double> z);

std::complex<double> erfc_cplx(std::complex<double> z,
                               const SpecFunConfig& cfg = {});

double gamma_pos(double x);

}  // namespace cone
