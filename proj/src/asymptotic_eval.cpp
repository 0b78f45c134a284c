#include "cone/asymptotic_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cone/detail/complex_math.hpp"
#include "cone/errors.hpp"
#include "cone/specfun.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
constexpr int kCauchyNodes = 128;

// Minimum of Gamma on (0, inf), attained at 1.4616...
constexpr double kGammaMin = 0.88560319441088870;

void check_alpha_beta(int alpha, int beta) {
  if (alpha != 1 && alpha != -1) throw DomainError("alpha must be +1 or -1");
  if (beta != 1 && beta != -1) throw DomainError("beta must be +1 or -1");
}

PolePhaseSet checked_phases(const ConeGeometry& g, double eta, int alpha, const char* what) {
  PolePhaseSet phases = pole_phases(g, eta, alpha);
  for (const PolePhase& p : phases) {
    if (p.on_interface) throw ValidityError(std::string(what) + ": pole phase on the interface");
  }
  return phases;
}

// Removed pole of the amplitude in the s-plane.
cplx pole_location(const PolePhase& p, int beta) {
  return double(p.sigma) * std::sqrt(kI * (double(beta) - std::sin(p.phi)));
}

// Amplitude with the beta e^{i beta x} / 2pi factor removed:
// cot[(pi/2 + alpha eta + i log v) / 2rho] / (s^2 - 2 beta i)^{1/2},
// v = beta i - s^2 + s (s^2 - 2 beta i)^{1/2}.
cplx normalized_amplitude(cplx s, double eta, double rho, int alpha, int beta) {
  const cplx root = std::sqrt(s * s - 2.0 * beta * kI);
  const cplx v = double(beta) * kI - s * s + s * root;
  return detail::cot((0.5 * kPi + alpha * eta + kI * std::log(v)) / (2.0 * rho)) / root;
}

cplx erfc_pair_term(double x, const PolePhase& p, double rho) {
  const double sphi = std::sin(p.phi);
  const double sx = std::sqrt(x);
  const cplx z1 = std::polar(sx * std::sqrt(std::max(0.0, 1.0 - sphi)), -0.25 * kPi);
  const cplx z2 = std::polar(sx * std::sqrt(std::max(0.0, 1.0 + sphi)), 0.25 * kPi);
  const double sigma = p.sigma;
  return rho * std::polar(1.0, x * sphi) * (-0.5 * sigma) * (erfc_cplx(z1) + erfc_cplx(z2));
}

// Trapezoid-rule Cauchy extraction of b_0, b_2, ..., b_{2 kmax}.
BCoeffs cauchy_coefficients(double eta, const ConeGeometry& g, int alpha, int beta, int kmax) {
  if (!std::isfinite(eta)) throw DomainError("b_taylor: eta must be finite");
  const PolePhaseSet phases = checked_phases(g, eta, alpha, "b_taylor");
  const double rho = g.rho();

  std::vector<cplx> poles;
  double nearest = std::numeric_limits<double>::infinity();
  for (const PolePhase& p : phases) {
    poles.push_back(pole_location(p, beta));
    nearest = std::min(nearest, std::abs(poles.back()));
  }

  double radius = 0.5;
  if (nearest < 1.0) radius = std::min(radius, 0.5 * nearest);
  auto clear = [&](double r) {
    for (const cplx& s : poles) {
      if (std::abs(std::abs(s) - r) < std::min(0.05, 0.5 * r)) return false;
    }
    return true;
  };
  if (!clear(radius)) {
    bool found = false;
    for (double f : {0.8, 0.6, 0.4}) {
      if (clear(radius * f)) {
        radius *= f;
        found = true;
        break;
      }
    }
    if (!found) throw GeometryError("b_taylor: no Cauchy radius clears the removed poles");
  }

  const cplx residue = kI * rho;  // -rho / i
  BCoeffs out;
  out.alpha = alpha;
  out.beta = beta;
  out.kmax = kmax;
  out.radius = radius;
  std::vector<detail::CompensatedSum> acc(kmax + 1);
  for (int n = 0; n < kCauchyNodes; ++n) {
    const cplx unit = std::polar(1.0, 2.0 * kPi * n / kCauchyNodes);
    const cplx s = radius * unit;
    detail::CompensatedSum b;
    b.add(normalized_amplitude(s, eta, rho, alpha, beta));
    for (const cplx& sp : poles) b.add(-residue / (s - sp));
    const cplx bval = b.value();
    for (int k = 0; k <= kmax; ++k) {
      // coefficient of s^{2k}: mean of B(s) s^{-2k}
      acc[k].add(bval * std::pow(std::conj(unit), 2 * k) / std::pow(radius, 2 * k));
    }
  }
  for (int k = 0; k <= kmax; ++k) out.coeffs.push_back(acc[k].value() / double(kCauchyNodes));
  return out;
}

struct Pieces {
  struct Alpha {
    std::vector<ExpansionBreakdown::Term> geometric;  // S-level
    std::vector<ExpansionBreakdown::Term> erfc;       // S-level, includes x powers
    std::vector<ExpansionBreakdown::Term> diffractive;
  };
  std::array<Alpha, 2> alpha;
  double next_term = 0.0;  // magnitude of the first omitted diffractive term
};

// Diffractive coefficient Gamma(k + 1/2) sum_beta (beta / 2pi) e^{i beta x} b_{2k}.
cplx diffractive_coefficient(const std::array<BCoeffs, 2>& by_beta, int k, double x) {
  cplx sum{};
  for (const BCoeffs& b : by_beta) {
    sum += double(b.beta) / (2.0 * kPi) * std::polar(1.0, b.beta * x) * b.coeffs[k];
  }
  return std::tgamma(k + 0.5) * sum;
}

Pieces uniform_pieces(double x, double eta, const ConeGeometry& g, int kmax) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("s_uniform: x must be finite and > 0");
  if (!std::isfinite(eta)) throw DomainError("s_uniform: eta must be finite");
  if (kmax < 0 || kmax > kMaxTaylorIndex) throw DomainError("s_uniform: kmax must lie in [0, 4]");
  Pieces out;
  const int extra = kmax + 1;
  for (int a = 0; a < 2; ++a) {
    const int alpha = a == 0 ? 1 : -1;
    const PolePhaseSet phases = checked_phases(g, eta, alpha, "s_uniform");
    auto& piece = out.alpha[a];
    for (const PolePhase& p : phases) {
      if (p.sigma > 0) piece.geometric.push_back({p.k, g.rho() * std::polar(1.0, x * std::sin(p.phi))});
      piece.erfc.push_back({p.k, erfc_pair_term(x, p, g.rho())});
    }
    // One extra coefficient feeds the error heuristic.
    std::array<BCoeffs, 2> by_beta;
    for (int b = 0; b < 2; ++b) {
      const int beta = b == 0 ? 1 : -1;
      by_beta[b] = cauchy_coefficients(eta, g, alpha, beta, extra);
      by_beta[b].coeffs[0] = b0_closed_form(eta, g, alpha, beta);
    }
    for (int k = 0; k <= kmax; ++k) {
      piece.diffractive.push_back({k, diffractive_coefficient(by_beta, k, x) * std::pow(x, -(2.0 * k + 1.0) / 2.0)});
    }
    out.next_term += std::abs(diffractive_coefficient(by_beta, extra, x)) * std::pow(x, -(2.0 * extra + 1.0) / 2.0);
  }
  return out;
}

}  // namespace

EvalResult s_small_x(double x, double eta, const ConeGeometry& g) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("s_small_x: x must be finite and >= 0");
  if (!std::isfinite(eta)) throw DomainError("s_small_x: eta must be finite");
  if (x >= 2.0) throw DomainError("s_small_x: requires x < 2");
  const double inv_rho = 1.0 / g.rho();
  // Gamma(j/rho + 1) >= min(Gamma(1/rho + 1), Gamma_min) for every j >= 1.
  const double gmin = std::min(std::tgamma(inv_rho + 1.0), inv_rho + 1.0 < 1.4616321449683623 ? kGammaMin : 1e300);
  const double xr = std::pow(x, inv_rho);
  const double bound = x * x / (4.0 - x * x) + (2.0 / gmin) * xr / (std::pow(2.0, inv_rho) - xr);
  return {cplx(1.0, 0.0), bound, Method::small_x, true};
}

cplx residue_terms(double x, const PolePhaseSet& phases, const ConeGeometry& g) {
  cplx sum{};
  for (const PolePhase& p : phases) {
    if (p.on_interface) continue;
    if (p.phi > -0.5 * kPi && p.phi < 0.5 * kPi) sum += g.rho() * std::polar(1.0, x * std::sin(p.phi));
  }
  return sum;
}

cplx erfc_front(double x, double eta, const ConeGeometry& g, int alpha) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("erfc_front: x must be finite and >= 0");
  const PolePhaseSet phases = checked_phases(g, eta, alpha, "erfc_front");
  cplx sum{};
  for (const PolePhase& p : phases) {
    if (p.sigma > 0) sum += g.rho() * std::polar(1.0, x * std::sin(p.phi));
    sum += erfc_pair_term(x, p, g.rho());
  }
  return sum;
}

cplx b0_closed_form(double eta, const ConeGeometry& g, int alpha, int beta) {
  check_alpha_beta(alpha, beta);
  const PolePhaseSet phases = checked_phases(g, eta, alpha, "b0_closed_form");
  const double rho = g.rho();
  cplx braces = -double(beta) / std::sqrt(2.0) *
                detail::cot(cplx((1.0 - beta) * 0.5 * kPi + alpha * eta, 0.0) / (2.0 * rho));
  for (const PolePhase& p : phases) {
    braces -= rho * p.sigma / std::sqrt(1.0 - beta * std::sin(p.phi));
  }
  return std::polar(1.0, -beta * 0.25 * kPi) / kI * braces;
}

BCoeffs b_taylor(double eta, const ConeGeometry& g, int alpha, int beta, int kmax) {
  check_alpha_beta(alpha, beta);
  if (kmax < 0 || kmax > kMaxTaylorIndex) throw DomainError("b_taylor: kmax must lie in [0, 4]");
  BCoeffs out = cauchy_coefficients(eta, g, alpha, beta, kmax);
  out.coeffs[0] = b0_closed_form(eta, g, alpha, beta);
  return out;
}

BCoeffs b_cauchy(double eta, const ConeGeometry& g, int alpha, int beta, int kmax) {
  check_alpha_beta(alpha, beta);
  if (kmax < 0 || kmax > kMaxTaylorIndex) throw DomainError("b_cauchy: kmax must lie in [0, 4]");
  return cauchy_coefficients(eta, g, alpha, beta, kmax);
}

EvalResult s_uniform(double x, double eta, const ConeGeometry& g, int kmax) {
  const Pieces pieces = uniform_pieces(x, eta, g, kmax);
  cplx sum{};
  double last = 0.0;
  for (const auto& a : pieces.alpha) {
    for (const auto& t : a.geometric) sum += t.value;
    for (const auto& t : a.erfc) sum += t.value;
    for (const auto& t : a.diffractive) sum += t.value;
    last += std::abs(a.diffractive.back().value);
  }
  EvalResult r{sum, last + pieces.next_term, Method::uniform, false};
  return r;
}

cplx KernelBreakdown::recombine() const {
  cplx sum{};
  const double root = std::sqrt(x);
  for (const ExpansionBreakdown& part : parts) {
    for (const auto& t : part.geometric) sum += t.value;
    for (const auto& t : part.erfc_front) sum += t.value / root;
    for (const auto& t : part.diffractive) sum += t.value * std::pow(x, -(2.0 * t.index + 1.0) / 2.0);
  }
  return sum;
}

KernelBreakdown kernel_breakdown(const KernelQuery& q, const ConeGeometry& g, int kmax) {
  const ReducedArgs args = reduce(q, g);
  const Pieces pieces = uniform_pieces(args.x, args.eta, g, kmax);
  const cplx pre = prefactor(q, g);
  const double root = std::sqrt(args.x);
  KernelBreakdown out;
  out.x = args.x;
  for (int a = 0; a < 2; ++a) {
    ExpansionBreakdown& part = out.parts[a];
    part.alpha = a == 0 ? 1 : -1;
    part.valid = true;
    for (const auto& t : pieces.alpha[a].geometric) part.geometric.push_back({t.index, pre * t.value});
    for (const auto& t : pieces.alpha[a].erfc) part.erfc_front.push_back({t.index, pre * t.value * root});
    for (const auto& t : pieces.alpha[a].diffractive) {
      part.diffractive.push_back({t.index, pre * t.value * std::pow(args.x, (2.0 * t.index + 1.0) / 2.0)});
    }
  }
  return out;
}

cplx images_closed_form(const KernelQuery& q, int N) {
  q.validate();
  if (N < 1) throw DomainError("images_closed_form: N must be >= 1");
  const double eta = q.theta1 - q.theta2;
  cplx sum{};
  for (int j = 0; j < N; ++j) {
    const double d2 = q.r1 * q.r1 + q.r2 * q.r2 - 2.0 * q.r1 * q.r2 * std::cos(eta - 2.0 * kPi * j / N);
    // exp[d2 / (4 i t)] = exp[-i d2 / (4t)]
    sum += std::polar(1.0, -d2 / (4.0 * q.t));
  }
  // -1 / (4 pi i t) = i / (4 pi t)
  return cplx(0.0, 1.0 / (4.0 * kPi * q.t)) * sum;
}

namespace detail {

EvalResult preliminary_formula(double x, double eta, const ConeGeometry& g) {
  const double rho = g.rho();
  cplx sum{};
  cplx diffractive{};
  for (int alpha : {1, -1}) {
    sum += residue_terms(x, pole_phases(g, eta, alpha), g);
    diffractive += detail::cot(cplx(alpha * eta / (2.0 * rho), 0.0)) * std::polar(1.0, x + 0.25 * kPi) -
                   detail::cot(cplx((alpha * eta + kPi) / (2.0 * rho), 0.0)) * std::polar(1.0, -(x + 0.25 * kPi));
  }
  // Saddle-point value of each horizontal integral: Gamma(1/2) A(0) x^{-1/2}.
  const cplx lead = diffractive / std::sqrt(8.0 * kPi * x);
  sum += lead;
  return {sum, std::abs(lead) / x, Method::preliminary, false};
}

}  // namespace detail

EvalResult s_preliminary(double x, double eta, const ConeGeometry& g) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("s_preliminary: x must be finite and > 0");
  if (!std::isfinite(eta)) throw DomainError("s_preliminary: eta must be finite");
  if (interface_distance(eta, g) < kPreliminaryMinDistance) {
    throw ValidityError("s_preliminary: too close to the interface");
  }
  return detail::preliminary_formula(x, eta, g);
}

}  // namespace cone
