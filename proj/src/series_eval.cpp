#include "cone/series_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cone/errors.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;

// log of the envelope (x/2)^nu / Gamma(nu + 1) bounding |J_nu(x)|.
double log_envelope(double nu, double x) { return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0); }

// Ratio of consecutive envelopes, nu -> nu + 1/rho. Decreasing in nu.
double envelope_ratio(double nu, double x, double inv_rho) {
  return std::exp(inv_rho * std::log(0.5 * x) + std::lgamma(nu + 1.0) - std::lgamma(nu + inv_rho + 1.0));
}

}  // namespace

void SeriesConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("SeriesConfig: tol must be > 0");
  if (max_modes < 8) throw DomainError("SeriesConfig: max_modes must be >= 8");
  specfun.validate();
}

std::pair<int, double> series_truncation(double x, const ConeGeometry& g, const SeriesConfig& cfg) {
  if (x == 0.0) return {0, 0.0};
  const double inv_rho = 1.0 / g.rho();
  // The envelope only decays super-geometrically past nu ~ e x / 2.
  const double floor_nu = x < 2.0 ? x : std::numbers::e * x / 2.0;
  for (int j = 0; j <= cfg.max_modes; ++j) {
    const double next = (j + 1) * inv_rho;
    if (next <= floor_nu) continue;
    const double q = envelope_ratio(next, x, inv_rho);
    if (q >= 1.0) continue;
    const double tail = 2.0 * std::exp(log_envelope(next, x)) / (1.0 - q);
    if (tail <= cfg.tol) return {j, tail};
  }
  return {-1, std::numeric_limits<double>::infinity()};
}

std::vector<EvalResult> s_series_multi(double x, std::span<const double> etas,
                                       const ConeGeometry& g, const SeriesConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(x) || x < 0.0) throw DomainError("s_series: x must be finite and >= 0");
  for (double eta : etas) {
    if (!std::isfinite(eta)) throw DomainError("s_series: eta must be finite");
  }
  std::vector<EvalResult> out(etas.size());
  if (x == 0.0) {
    for (auto& r : out) r = {cplx(1.0, 0.0), 0.0, Method::series, true};
    return out;
  }

  auto [last, tail] = series_truncation(x, g, cfg);
  const bool truncated = last < 0;
  if (truncated) {
    // The ladder's node count grows linearly in x; past this a partial sum is not worth its memory.
    if (x > 1e4) {
      throw AccuracyError("s_series: truncation index exceeds max_modes", cplx(std::nan(""), std::nan("")),
                          std::numeric_limits<double>::infinity());
    }
    last = cfg.max_modes;
    const double nu = (last + 1) / g.rho();
    tail = 2.0 * std::exp(log_envelope(nu, x)) * (last + 1);
  }
  const double inv_rho = 1.0 / g.rho();
  const std::vector<double> bessel = bessel_j_ladder(x, inv_rho, last + 1, cfg.specfun);

  // Per-mode Bessel errors accumulate roughly as a random walk.
  const double env = std::min(1.0, std::sqrt(2.0 / (kPi * x)));
  const double bessel_err = 2.0 * std::sqrt(double(last + 1)) * cfg.specfun.rel_tol * env;

  for (std::size_t e = 0; e < etas.size(); ++e) {
    cplx sum = bessel[0];
    for (int j = 1; j <= last; ++j) {
      const double nu = j * inv_rho;
      sum += 2.0 * std::polar(bessel[j], 0.5 * kPi * nu) * std::cos(nu * etas[e]);
    }
    out[e] = {sum, tail + bessel_err, Method::series, true};
  }
  if (truncated) {
    throw AccuracyError("s_series: truncation index exceeds max_modes", out.empty() ? cplx{} : out[0].value,
                        tail);
  }
  return out;
}

EvalResult s_series(double x, double eta, const ConeGeometry& g, const SeriesConfig& cfg) {
  const double etas[] = {eta};
  return s_series_multi(x, etas, g, cfg)[0];
}

EvalResult heat_kernel(double s, const KernelQuery& q, const ConeGeometry& g, const SeriesConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(s) || s <= 0.0) throw DomainError("heat_kernel: s must be > 0");
  for (double v : {q.r1, q.r2, q.theta1, q.theta2}) {
    if (!std::isfinite(v)) throw DomainError("heat_kernel: non-finite query");
  }
  if (q.r1 < 0.0 || q.r2 < 0.0) throw DomainError("heat_kernel: radii must be >= 0");

  const double z = q.r1 * q.r2 / (2.0 * s);
  const double eta = q.theta1 - q.theta2;
  const double inv_rho = 1.0 / g.rho();
  // exp(-(r1^2 + r2^2) / 4s) I_nu(z) = exp(-(r1 - r2)^2 / 4s) * [exp(-z) I_nu(z)]
  const double gauss = std::exp(-(q.r1 - q.r2) * (q.r1 - q.r2) / (4.0 * s));
  const double outer = gauss / (2.0 * s) / (2.0 * kPi * g.rho());

  double sum = bessel_i_scaled(0.0, z, cfg.specfun);
  double magnitude = sum;  // sum of |terms|; sets the rounding floor under cancellation
  double tail = 0.0;
  if (z > 0.0) {
    const double scale = std::max(sum, 1e-300);
    bool done = false;
    for (int j = 1; j <= cfg.max_modes; ++j) {
      const double nu = j * inv_rho;
      const double term = 2.0 * bessel_i_scaled(nu, z, cfg.specfun);
      sum += term * std::cos(nu * eta);
      magnitude += term;
      // exp(-z) I_nu(z) <= exp(-z + z^2 / (4 (nu + 1))) (z/2)^nu / Gamma(nu + 1)
      const double next = nu + inv_rho;
      const double qn = envelope_ratio(next, z, inv_rho);
      if (next > z && qn < 1.0) {
        tail = 2.0 * std::exp(-z + z * z / (4.0 * (next + 1.0)) + log_envelope(next, z)) / (1.0 - qn);
        if (tail <= cfg.tol * scale) {
          done = true;
          break;
        }
      }
    }
    if (!done) throw AccuracyError("heat_kernel: truncation index exceeds max_modes", outer * sum, outer * tail);
  }
  const double err = outer * (tail + 4.0 * cfg.specfun.rel_tol * magnitude);
  return {cplx(outer * sum, 0.0), err, Method::series, true};
}

}  // namespace cone
