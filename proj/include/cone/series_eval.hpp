#pragma once

#include <span>
#include <vector>

#include "cone/kernel_core.hpp"
#include "cone/specfun.hpp"

namespace cone {

struct SeriesConfig {
  double tol = 1e-12;  // absolute tail tolerance
  int max_modes = 4000;
  SpecFunConfig specfun{};

  void validate() const;
};

/// Above this x the series needs O(x / rho) Bessel evaluations per point.
inline constexpr double kSeriesExpensiveX = 50.0;

/// Number of modes j = 0..J* the series keeps at (x, rho), or -1 when the
/// truncation rule needs more than max_modes. Second member: tail bound.
std::pair<int, double> series_truncation(double x, const ConeGeometry& g, const SeriesConfig& cfg);

/// S(x, eta) = J_0(x) + 2 sum_j i^{j/rho} J_{j/rho}(x) cos(j eta / rho).
EvalResult s_series(double x, double eta, const ConeGeometry& g, const SeriesConfig& cfg = {});

/// s_series at several eta for one x; the Bessel values are computed once.
std::vector<EvalResult> s_series_multi(double x, std::span<const double> etas,
                                       const ConeGeometry& g, const SeriesConfig& cfg = {});

/// Heat kernel exp(-s Delta) on the cone from Weber's second exponential
/// integral. The value is real and stored in value.real().
EvalResult heat_kernel(double s, const KernelQuery& q, const ConeGeometry& g,
                       const SeriesConfig& cfg = {});

}  // namespace cone
