#pragma once

#include <array>
#include <vector>

#include "cone/kernel_core.hpp"

namespace cone {

inline constexpr int kMaxTaylorIndex = 4;  // largest k for b_{2k}
inline constexpr int kDefaultKmax = 2;

/// Leading-order small-x value S = 1 with the explicit majorant
/// x^2/(4 - x^2) + (2/Gmin) x^{1/rho} / (2^{1/rho} - x^{1/rho}), x < 2.
EvalResult s_small_x(double x, double eta, const ConeGeometry& g);

/// Sum of rho e^{i x sin phi} over phases in the open window (-pi/2, pi/2).
cplx residue_terms(double x, const PolePhaseSet& phases, const ConeGeometry& g);

/// Full pole-originated part of S_alpha, including the erfc transition terms.
cplx erfc_front(double x, double eta, const ConeGeometry& g, int alpha);

/// Even Taylor coefficients at s = 0 of the pole-subtracted amplitude
/// B_{alpha,beta}, normalised by (2 pi / beta) e^{-i beta x} so they do not
/// depend on x. coeffs[k] holds b_{2k}.
struct BCoeffs {
  int alpha = 1;
  int beta = 1;
  int kmax = 0;
  double radius = 0.5;  // Cauchy circle radius actually used
  std::vector<cplx> coeffs;
};

/// coeffs[0] from the closed form, higher ones by trapezoid Cauchy extraction
/// on |s| = radius (128 nodes). Refuses kmax > 4.
BCoeffs b_taylor(double eta, const ConeGeometry& g, int alpha, int beta, int kmax);

/// Same as b_taylor but every coefficient, b_0 included, is extracted;
/// the independent side of the b_0 cross-check.
BCoeffs b_cauchy(double eta, const ConeGeometry& g, int alpha, int beta, int kmax);

/// Closed form of the normalised leading coefficient b_0.
cplx b0_closed_form(double eta, const ConeGeometry& g, int alpha, int beta);

/// Uniform large-x expansion of S. abs_err is heuristic (rigorous = false).
EvalResult s_uniform(double x, double eta, const ConeGeometry& g, int kmax = kDefaultKmax);

/// Kernel-level pieces of the uniform expansion for one alpha. Each term
/// already includes the prefactor; erfc terms are the coefficients of
/// x^{-1/2} and diffractive terms the coefficients of x^{-(2k+1)/2}.
struct ExpansionBreakdown {
  struct Term {
    long index = 0;
    cplx value{};
  };
  int alpha = 1;
  bool valid = true;
  std::vector<Term> geometric;
  std::vector<Term> erfc_front;
  std::vector<Term> diffractive;
};

struct KernelBreakdown {
  double x = 0.0;
  std::array<ExpansionBreakdown, 2> parts;  // alpha = +1, -1

  cplx recombine() const;
};

KernelBreakdown kernel_breakdown(const KernelQuery& q, const ConeGeometry& g, int kmax = kDefaultKmax);

/// -(1/4 pi i t) sum_{j<N} exp[(r1^2 + r2^2 - 2 r1 r2 cos(eta - 2 pi j/N)) / 4it].
cplx images_closed_form(const KernelQuery& q, int N);

/// Non-uniform leading-order expansion; requires interface_distance >= 0.2.
EvalResult s_preliminary(double x, double eta, const ConeGeometry& g);

inline constexpr double kPreliminaryMinDistance = 0.2;

namespace detail {
/// The preliminary formula without the interface-distance check; for
/// diagnostics that need to watch it fail near the interface.
EvalResult preliminary_formula(double x, double eta, const ConeGeometry& g);
}  // namespace detail

}  // namespace cone
