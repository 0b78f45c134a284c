#include "cone/contour_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cone/detail/complex_math.hpp"
#include "cone/errors.hpp"
#include "cone/quadrature.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRoundingFactor = 8.0;
const cplx kI(0.0, 1.0);

double default_length(const ContourSpec& spec, double x) {
  if (spec.L > 0.0) return spec.L;
  return std::max(2.0 * spec.R, (2.0 / x) * std::log(10.0 / spec.tol));
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double arc_distance(cplx p, double R, double delta) {
  const double arg = std::arg(p);
  if (std::abs(arg) <= kPi - delta) return std::abs(std::abs(p) - R);
  const cplx e1 = std::polar(R, kPi - delta);
  const cplx e2 = std::polar(R, -(kPi - delta));
  return std::min(std::abs(p - e1), std::abs(p - e2));
}

class Integrand {
 public:
  Integrand(double x, double eta, double rho) : half_x_(0.5 * x), eta_(eta), two_rho_(2.0 * rho) {}

  // e^{(x/2)(v - 1/v)} {cot[(pi/2 + eta + i log v)/2rho] + cot[(pi/2 - eta + i log v)/2rho]} / v
  cplx operator()(cplx v) const {
    const cplx ilog = kI * std::log(v);
    const cplx amp = detail::cot((0.5 * kPi + eta_ + ilog) / two_rho_) +
                     detail::cot((0.5 * kPi - eta_ + ilog) / two_rho_);
    return std::exp(half_x_ * (v - 1.0 / v)) * amp / v;
  }

  // size of the exponent, which sets the relative rounding of a sample
  double exponent_size(cplx v) const { return std::abs(half_x_ * (v - 1.0 / v)); }

 private:
  double half_x_;
  double eta_;
  double two_rho_;
};

struct Pieces {
  cplx circle;
  cplx lower;
  cplx upper;
  double magnitude = 0.0;  // sum of |term| (1 + |exponent|), sets the rounding floor
};

Pieces integrate(const Integrand& f, const ContourSpec& spec, double L, int level) {
  const auto& rule = quad::panel_rule();
  const int pc = spec.panels_circle << level;
  const int pr = spec.panels_ray << level;
  const double psi_max = kPi - spec.delta;
  const double eps = spec.R * std::sin(spec.delta);
  const double start = spec.R * std::cos(spec.delta);

  Pieces out{};
  std::vector<double> nodes, weights;
  quad::append_panels(quad::uniform_breaks(-psi_max, psi_max, pc), rule, nodes, weights);
  detail::CompensatedSum circle;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx v = std::polar(spec.R, nodes[i]);
    const cplx term = weights[i] * f(v) * kI * v;
    circle.add(term);
    out.magnitude += std::abs(term) * (1.0 + f.exponent_size(v));
  }
  out.circle = circle.value();

  // Log-graded breaks on the rays, fine near the circle junction.
  const double h0 = 0.05;
  std::vector<double> breaks(pr + 1);
  const double span = (L - start + h0) / h0;
  for (int k = 0; k <= pr; ++k) breaks[k] = start - h0 + h0 * std::pow(span, double(k) / pr);
  breaks.front() = start;
  breaks.back() = L;
  nodes.clear();
  weights.clear();
  quad::append_panels(breaks, rule, nodes, weights);
  detail::CompensatedSum lower, upper;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    // lower ray traversed inward (dv = -ds, reversed limits), upper outward.
    const cplx lo = weights[i] * f(cplx(-nodes[i], -eps));
    const cplx up = -weights[i] * f(cplx(-nodes[i], eps));
    lower.add(lo);
    upper.add(up);
    out.magnitude += std::abs(lo) * (1.0 + f.exponent_size(cplx(-nodes[i], -eps))) +
                     std::abs(up) * (1.0 + f.exponent_size(cplx(-nodes[i], eps)));
  }
  out.lower = lower.value();
  out.upper = upper.value();
  return out;
}

}  // namespace

void ContourSpec::validate() const {
  if (!(R > 1.0) || !std::isfinite(R)) throw DomainError("ContourSpec: R must be > 1");
  if (!(delta > 0.0 && delta < 0.25 * kPi)) throw DomainError("ContourSpec: delta must lie in (0, pi/4)");
  if (panels_circle < 1 || panels_ray < 1) throw DomainError("ContourSpec: panel counts must be positive");
  if (!(tol > 0.0)) throw DomainError("ContourSpec: tol must be > 0");
  if (L > 0.0 && L <= R) throw DomainError("ContourSpec: L must exceed R");
}

double contour_pole_clearance(const ContourSpec& spec, double L, double eta, const ConeGeometry& g) {
  const double eps = spec.R * std::sin(spec.delta);
  const double start = spec.R * std::cos(spec.delta);
  double best = std::numeric_limits<double>::infinity();
  for (int alpha : {1, -1}) {
    for (const PolePhase& p : pole_phases(g, eta, alpha)) {
      const cplx pole = std::polar(1.0, p.phi);
      best = std::min(best, arc_distance(pole, spec.R, spec.delta));
      best = std::min(best, point_segment_distance(pole, cplx(-start, eps), cplx(-L, eps)));
      best = std::min(best, point_segment_distance(pole, cplx(-start, -eps), cplx(-L, -eps)));
    }
  }
  return best;
}

ContourSpec resolve_contour(double x, double eta, const ConeGeometry& g, const ContourSpec& spec) {
  spec.validate();
  if (contour_pole_clearance(spec, default_length(spec, x), eta, g) >= spec.margin) return spec;
  for (double delta : {0.1, 0.17, 0.23}) {
    for (double R : {1.3, 1.45, 1.6}) {
      ContourSpec trial = spec;
      trial.delta = delta;
      trial.R = R;
      if (trial.L > 0.0 && trial.L <= R) continue;
      if (contour_pole_clearance(trial, default_length(trial, x), eta, g) >= spec.margin) return trial;
    }
  }
  throw GeometryError("s_contour: no contour keeps the pole margin");
}

EvalResult s_contour(double x, double eta, const ConeGeometry& g, const ContourSpec& spec_in) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("s_contour: x must be finite and > 0");
  if (!std::isfinite(eta)) throw DomainError("s_contour: eta must be finite");
  const ContourSpec spec = resolve_contour(x, eta, g, spec_in);
  const double L = default_length(spec, x);
  const Integrand f(x, eta, g.rho());

  // The rays stop at L; beyond it the integrand decays like e^{-x s / 2}, which
  // both quadrature levels miss alike, so it is added to the estimate explicitly.
  const double eps = spec.R * std::sin(spec.delta);
  const double tail = (std::abs(f(cplx(-L, -eps))) + std::abs(f(cplx(-L, eps)))) * (2.0 / x) / (4.0 * kPi);

  constexpr int kMaxDoublings = 4;
  cplx prev{};
  double err = std::numeric_limits<double>::infinity();
  for (int level = 0; level <= kMaxDoublings; ++level) {
    const Pieces p = integrate(f, spec, L, level);
    const cplx value = (p.circle + p.lower + p.upper) / (4.0 * kPi);
    if (level > 0) {
      err = std::abs(value - prev) + tail + kRoundingFactor * kEps * p.magnitude / (4.0 * kPi);
      if (err <= spec.tol) {
        EvalResult r{value, err, Method::contour, true};
        if (x > kContourCeilingX) r.warning = "contour: x above practical ceiling";
        return r;
      }
    }
    prev = value;
  }
  throw AccuracyError("s_contour: quadrature did not converge", prev, err);
}

}  // namespace cone
