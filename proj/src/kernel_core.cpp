#include "cone/kernel_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cone/errors.hpp"

namespace cone {

namespace {
constexpr double kPi = std::numbers::pi;
}

ConeGeometry::ConeGeometry(double rho) : rho_(rho) {
  if (!std::isfinite(rho) || rho <= 0.0) throw DomainError("ConeGeometry: rho must be finite and > 0");
}

double ConeGeometry::period() const { return 2.0 * kPi * rho_; }

void KernelQuery::validate() const {
  for (double v : {t, r1, theta1, r2, theta2}) {
    if (!std::isfinite(v)) throw DomainError("KernelQuery: non-finite field");
  }
  if (t <= 0.0) throw DomainError("KernelQuery: t must be > 0");
  if (r1 <= 0.0 || r2 <= 0.0) throw DomainError("KernelQuery: radii must be > 0");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::series: return "series";
    case Method::contour: return "contour";
    case Method::small_x: return "small_x";
    case Method::uniform: return "uniform";
    case Method::images: return "images";
    case Method::preliminary: return "preliminary";
  }
  return "unknown";
}

ReducedArgs reduce(const KernelQuery& q, const ConeGeometry&) {
  q.validate();
  return {q.r1 * q.r2 / (2.0 * q.t), q.theta1 - q.theta2};
}

cplx prefactor(const KernelQuery& q, const ConeGeometry& g) {
  if (!std::isfinite(q.t) || q.t <= 0.0) throw DomainError("prefactor: t must be > 0");
  const double phase = -(q.r1 * q.r1 + q.r2 * q.r2) / (4.0 * q.t);
  // -1 / (4 pi i rho t) = i / (4 pi rho t)
  return cplx(0.0, 1.0 / (4.0 * kPi * g.rho() * q.t)) * std::polar(1.0, phase);
}

PolePhaseSet pole_phases(const ConeGeometry& g, double eta, int alpha) {
  if (alpha != 1 && alpha != -1) throw DomainError("pole_phases: alpha must be +1 or -1");
  const double base = 0.5 * kPi + alpha * eta;
  const double period = g.period();
  const long kmin = long(std::ceil((-kPi - base) / period)) - 1;
  const long kmax = long(std::floor((kPi - base) / period)) + 1;
  PolePhaseSet out;
  for (long k = kmin; k <= kmax; ++k) {
    const double phi = base + period * k;
    if (phi < -kPi || phi >= kPi) continue;
    const double c = std::cos(phi);
    PolePhase p;
    p.phi = phi;
    p.k = k;
    p.alpha = alpha;
    p.on_interface = std::abs(c) < kInterfaceGuard;
    p.sigma = (p.on_interface || c > 0.0) ? 1 : -1;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const PolePhase& a, const PolePhase& b) { return a.phi < b.phi; });
  return out;
}

double interface_distance(double eta, const ConeGeometry& g) {
  const double period = g.period();
  double best = std::numeric_limits<double>::infinity();
  for (double v : {-kPi, 0.0, kPi}) {
    const double d = eta - v;
    const double r = d - period * std::round(d / period);
    best = std::min(best, std::abs(r));
  }
  return best;
}

bool on_interface(double eta, const ConeGeometry& g) {
  for (int alpha : {1, -1}) {
    for (const PolePhase& p : pole_phases(g, eta, alpha)) {
      if (p.on_interface) return true;
    }
  }
  return false;
}

EvalResult assemble_kernel(const EvalResult& s, const KernelQuery& q, const ConeGeometry& g) {
  const cplx pre = prefactor(q, g);
  EvalResult out = s;
  out.value = pre * s.value;
  out.abs_err = std::abs(pre) * s.abs_err;
  return out;
}

cplx conjugate_time(cplx kernel_at_positive_t) { return std::conj(kernel_at_positive_t); }

}  // namespace cone
