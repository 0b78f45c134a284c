#pragma once

#include <string_view>

#include "cone/kernel_core.hpp"

namespace cone {

/// Keyhole contour around the unit circle: the circle |v| = R cut at
/// arg v = +-(pi - delta), joined to horizontal rays Im v = +-R sin(delta)
/// running out to Re v = -L.
struct ContourSpec {
  double R = 1.3;
  double delta = 0.1;
  double L = 0.0;  // <= 0: max(2R, (2/x) ln(10/tol))
  int panels_circle = 96;
  int panels_ray = 48;
  double tol = 1e-10;
  double margin = 0.02;

  void validate() const;
};

/// Above this x the integrand grows like exp((x/2)(R - 1/R)) on the circle.
inline constexpr double kContourCeilingX = 30.0;

/// Smallest distance between the contour (for a given L) and any pole
/// e^{i phi}, phi in P_rho(eta) or P_rho(-eta).
double contour_pole_clearance(const ContourSpec& spec, double L, double eta, const ConeGeometry& g);

/// S(x, eta) by Gauss-Legendre panel quadrature of the loop integral.
/// abs_err is the difference between the last two refinement levels.
EvalResult s_contour(double x, double eta, const ConeGeometry& g, const ContourSpec& spec = {});

/// Which (R, delta) s_contour actually used after pole-margin adjustment.
ContourSpec resolve_contour(double x, double eta, const ConeGeometry& g, const ContourSpec& spec = {});

}  // namespace cone
