#include "cone/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cone/errors.hpp"
#include "cone/quadrature.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite input");
}

void check_bessel_args(double nu, double x, const char* what) {
  require_finite(nu, what);
  require_finite(x, what);
  if (nu < 0.0) throw DomainError(std::string(what) + ": order must be >= 0");
  if (x < 0.0) throw DomainError(std::string(what) + ": argument must be >= 0");
}

double envelope(double x) { return std::min(1.0, std::sqrt(2.0 / (kPi * x))); }

struct Estimate {
  double value = 0.0;
  double err = 0.0;
};

// Ascending series for J_nu (sign = -1) or exp(-x) I_nu (sign = +1, scaled).
// err is a rounding estimate from the largest term magnitude.
Estimate power_series(double nu, double x, double sign, double log_scale,
                      int max_terms) {
  const double half = 0.5 * x;
  const double lead_log = nu * std::log(half) - std::lgamma(nu + 1.0) - log_scale;
  double term = std::exp(lead_log);
  double sum = term;
  double max_term = std::abs(term);
  const double q = sign * half * half;
  int k = 1;
  for (; k < max_terms; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    max_term = std::max(max_term, std::abs(term));
    if (std::abs(term) <= 0.25 * kEps * std::abs(sum) && k > half) break;
    if (term == 0.0) break;
  }
  double err = kEps * max_term * (2.0 + std::sqrt(double(k)));
  if (k >= max_terms) err = std::max(err, std::abs(term) * 4.0);
  return {sum, err};
}

// Upper end of the exponential tail integral: x sinh t + nu t = L.
double tail_cutoff(double nu, double x, double tol) {
  const double target = std::log(1.0 / tol) + std::log(1.0 / std::max(x, 1e-300) + 1.0);
  auto f = [&](double t) { return x * std::sinh(t) + nu * t - target; };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;
  int panel_size = 16;
};

NodeSet oscillatory_nodes(int panels) {
  NodeSet set;
  quad::append_panels(quad::uniform_breaks(0.0, kPi, panels), quad::panel_rule(),
                      set.nodes, set.weights);
  return set;
}

NodeSet tail_nodes(double scale, double cutoff, int refine) {
  NodeSet set;
  const double h = std::min(cutoff, scale);
  quad::append_panels(quad::graded_breaks(h, cutoff, refine), quad::panel_rule(),
                      set.nodes, set.weights);
  return set;
}

// Panel-blocked sum to limit rounding growth over thousands of nodes.
template <class F>
double panel_sum(const NodeSet& set, F&& f) {
  double total = 0.0;
  for (std::size_t p = 0; p < set.nodes.size(); p += set.panel_size) {
    double part = 0.0;
    for (std::size_t i = p; i < p + set.panel_size; ++i) part += set.weights[i] * f(i);
    total += part;
  }
  return total;
}

int oscillatory_panels(double x, double nu, const SpecFunConfig& cfg) {
  return std::max(cfg.quad_panels, int(std::ceil((x + nu) * kPi / 8.0)));
}

// J_nu(x) = (1/pi) int_0^pi cos(x sin th - nu th) dth
//         - (sin(nu pi)/pi) int_0^inf exp(-x sinh t - nu t) dt,   x > 0.
Estimate bessel_j_integral(double nu, double x, const SpecFunConfig& cfg) {
  const double snu = std::sin(nu * kPi);
  const bool integer_order = std::abs(nu - std::round(nu)) < 1e-15;
  const double cutoff = integer_order ? 0.0 : tail_cutoff(nu, x, 0.01 * cfg.rel_tol);
  const double scale = 1.0 / (x + nu + 1.0);

  int panels = oscillatory_panels(x, nu, cfg);
  double prev = 0.0;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 5; ++level) {
    const NodeSet osc = oscillatory_nodes(panels);
    double value = panel_sum(osc, [&](std::size_t i) {
                     const double th = osc.nodes[i];
                     return std::cos(x * std::sin(th) - nu * th);
                   }) / kPi;
    if (!integer_order) {
      const NodeSet tail = tail_nodes(scale, cutoff, 1 << level);
      value -= snu / kPi * panel_sum(tail, [&](std::size_t i) {
                 const double t = tail.nodes[i];
                 return std::exp(-x * std::sinh(t) - nu * t);
               });
    }
    if (level > 0) {
      err = std::abs(value - prev);
      if (err <= cfg.rel_tol * std::max(std::abs(value), envelope(x))) {
        return {value, err};
      }
    }
    prev = value;
    panels *= 2;
  }
  return {prev, err};
}

}  // namespace

void SpecFunConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw DomainError("SpecFunConfig: rel_tol must lie in (0, 1e-3]");
  if (max_terms < 16) throw DomainError("SpecFunConfig: max_terms must be >= 16");
  if (quad_panels < 8) throw DomainError("SpecFunConfig: quad_panels must be >= 8");
}

double bessel_j(double nu, double x, const SpecFunConfig& cfg) {
  check_bessel_args(nu, x, "bessel_j");
  cfg.validate();
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;

  Estimate series{0.0, std::numeric_limits<double>::infinity()};
  if (x <= 2.0 || x <= 4.0 * std::sqrt(nu + 1.0)) {
    series = power_series(nu, x, -1.0, 0.0, std::max(cfg.max_terms, int(x) + 32));
    if (series.err <= cfg.rel_tol * std::abs(series.value)) return series.value;
  }
  const Estimate integral = bessel_j_integral(nu, x, cfg);
  const Estimate& best = series.err < integral.err ? series : integral;
  if (best.err <= cfg.rel_tol * std::max(std::abs(best.value), envelope(x))) return best.value;
  throw AccuracyError("bessel_j: tolerance not reached", best.value, best.err);
}

std::vector<double> bessel_j_ladder(double x, double step, int count,
                                    const SpecFunConfig& cfg) {
  check_bessel_args(step, x, "bessel_j_ladder");
  cfg.validate();
  std::vector<double> out(std::max(count, 0));
  if (count <= 0) return out;
  const double nu_max = step * (count - 1);
  if (x <= 2.0 || x == 0.0) {
    for (int j = 0; j < count; ++j) out[j] = bessel_j(step * j, x, cfg);
    return out;
  }

  // Shared nodes for the oscillatory part: two levels, P and 2P panels.
  const int panels = oscillatory_panels(x, nu_max, cfg);
  const NodeSet coarse = oscillatory_nodes(panels);
  const NodeSet fine = oscillatory_nodes(2 * panels);

  // Tail part: graded nodes resolving exp(-(x + nu) t) for every order.
  const double cutoff = tail_cutoff(0.0, x, 0.01 * cfg.rel_tol);
  const double scale = 1.0 / (x + nu_max + 1.0);
  const NodeSet tail_c = tail_nodes(scale, cutoff, 1);
  const NodeSet tail_f = tail_nodes(scale, cutoff, 2);

  struct Ladder {
    const NodeSet* set;
    std::vector<std::complex<double>> base;  // weight * exp(i x sin th)
    std::vector<std::complex<double>> rot;   // exp(-i step th)
    std::vector<std::complex<double>> cur;
  };
  auto make_osc = [&](const NodeSet& set) {
    Ladder l{&set, {}, {}, {}};
    const std::size_t n = set.nodes.size();
    l.base.resize(n);
    l.rot.resize(n);
    l.cur.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double th = set.nodes[i];
      l.base[i] = set.weights[i] * std::polar(1.0, x * std::sin(th));
      l.rot[i] = std::polar(1.0, -step * th);
    }
    return l;
  };
  Ladder lc = make_osc(coarse);
  Ladder lf = make_osc(fine);

  auto tail_values = [&](const NodeSet& set) {
    std::vector<double> f(set.nodes.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = set.weights[i] * std::exp(-x * std::sinh(set.nodes[i]));
    }
    return f;
  };
  const std::vector<double> fc = tail_values(tail_c);
  const std::vector<double> ff = tail_values(tail_f);

  auto osc_value = [&](Ladder& l, int j) {
    if (j % 64 == 0 && j > 0) {
      for (std::size_t i = 0; i < l.cur.size(); ++i) {
        l.cur[i] = std::polar(1.0, -step * j * l.set->nodes[i]);
      }
    }
    double total = 0.0;
    for (std::size_t p = 0; p < l.cur.size(); p += 16) {
      double part = 0.0;
      for (std::size_t i = p; i < p + 16; ++i) part += (l.base[i] * l.cur[i]).real();
      total += part;
    }
    for (std::size_t i = 0; i < l.cur.size(); ++i) l.cur[i] *= l.rot[i];
    return total / kPi;
  };
  auto tail_value = [&](const NodeSet& set, const std::vector<double>& f, double nu) {
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double e = f[i] * std::exp(-nu * set.nodes[i]);
      if (e == 0.0 && set.nodes[i] * nu > 745.0) break;
      total += e;
    }
    return total;
  };

  for (int j = 0; j < count; ++j) {
    const double nu = step * j;
    const double oc = osc_value(lc, j);
    const double of = osc_value(lf, j);
    double vc = oc;
    double vf = of;
    if (std::abs(nu - std::round(nu)) > 1e-15) {
      const double snu = std::sin(nu * kPi) / kPi;
      vc -= snu * tail_value(tail_c, fc, nu);
      vf -= snu * tail_value(tail_f, ff, nu);
    }
    const double err = std::abs(vf - vc);
    if (err <= cfg.rel_tol * std::max(std::abs(vf), envelope(x))) {
      out[j] = vf;
    } else {
      out[j] = bessel_j(nu, x, cfg);
    }
  }
  return out;
}

double bessel_i_scaled(double nu, double x, const SpecFunConfig& cfg) {
  check_bessel_args(nu, x, "bessel_i");
  cfg.validate();
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;

  // All series terms are positive, so the series is accurate whenever it
  // converges inside the term budget.
  if (x < 0.5 * cfg.max_terms) {
    const Estimate s = power_series(nu, x, 1.0, x, cfg.max_terms);
    if (s.err <= cfg.rel_tol * s.value) return s.value;
  }

  // exp(-x) I_nu(x) = (1/pi) int_0^pi exp(x (cos th - 1)) cos(nu th) dth
  //                 - (sin(nu pi)/pi) int_0^inf exp(-x (1 + cosh t) - nu t) dt
  const double snu = std::sin(nu * kPi);
  double prev = 0.0;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 5; ++level) {
    // exp(x (cos th - 1)) ~ exp(-x th^2 / 2): grade toward th = 0, and keep
    // every panel short against the cos(nu th) oscillation.
    const std::vector<double> graded = quad::graded_breaks(std::min(kPi, 1.0 / std::sqrt(x)), kPi);
    std::vector<double> breaks{0.0};
    for (std::size_t p = 0; p + 1 < graded.size(); ++p) {
      const double width = graded[p + 1] - graded[p];
      const int pieces = std::max(1 << level, int(std::ceil(width * (nu + 1.0) / 8.0)) << level);
      for (int r = 1; r <= pieces; ++r) breaks.push_back(graded[p] + width * r / pieces);
    }
    NodeSet peak;
    quad::append_panels(breaks, quad::panel_rule(), peak.nodes, peak.weights);
    double value = panel_sum(peak, [&](std::size_t i) {
                     const double th = peak.nodes[i];
                     return std::exp(x * (std::cos(th) - 1.0)) * std::cos(nu * th);
                   }) / kPi;
    if (snu != 0.0) {
      const NodeSet tail = tail_nodes(1.0 / (x + nu + 1.0), 40.0 / (x + nu + 1.0) + 1.0, 1 << level);
      value -= snu / kPi * panel_sum(tail, [&](std::size_t i) {
                 const double t = tail.nodes[i];
                 return std::exp(-x * (1.0 + std::cosh(t)) - nu * t);
               });
    }
    if (level > 0) {
      err = std::abs(value - prev);
      if (err <= 0.1 * cfg.rel_tol * std::abs(value)) return value;
    }
    prev = value;
  }
  throw AccuracyError("bessel_i: tolerance not reached", prev, err);
}

double bessel_i(double nu, double x, const SpecFunConfig& cfg) {
  const double scaled = bessel_i_scaled(nu, x, cfg);
  if (x > 700.0) throw DomainError("bessel_i: result overflows; use bessel_i_scaled");
  return scaled * std::exp(x);
}

// Modified trapezoidal rule for w(z) = (i/pi) int exp(-t^2) / (z - t) dt,
// Im z >= 0, with the pole correction term. Nodes are shifted by h/2 when
// Re z sits near a regular node so the sum and the correction never cancel.
std::complex<double> faddeeva_w(std::complex<double> z) {
  using cd = std::complex<double>;
  require_finite(z.real(), "faddeeva_w");
  require_finite(z.imag(), "faddeeva_w");
  if (z.imag() < 0.0) {
    // w(z) = 2 exp(-z^2) - w(-z)
    return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
  }
  constexpr double h = 0.5;
  constexpr int kTerms = 14;  // exp(-(14 h)^2) < 1e-21
  const double frac = std::abs(z.real() / h - std::round(z.real() / h));
  const bool shifted = frac < 0.25;
  const double offset = shifted ? 0.5 * h : 0.0;

  cd sum = 0.0;
  for (int k = -kTerms; k <= kTerms; ++k) {
    const double t = k * h + offset;
    sum += std::exp(-t * t) / (z - t);
  }
  sum *= cd(0.0, h / kPi);

  // Beyond Im z = pi / h the pole lies outside the strip that controls the
  // aliasing error and the plain sum is already accurate to ~exp(-pi^2/h^2).
  if (z.imag() >= kPi / h) return sum;
  const cd e = std::exp(cd(0.0, -2.0 * kPi / h) * z);
  const cd corr = 2.0 * std::exp(-z * z) / (shifted ? 1.0 + e : 1.0 - e);
  return sum + corr;
}

std::complex<double> erfc_cplx(std::complex<double> z, const SpecFunConfig& cfg) {
  cfg.validate();
  require_finite(z.real(), "erfc_cplx");
  require_finite(z.imag(), "erfc_cplx");
  if (z == std::complex<double>(0.0, 0.0)) return 1.0;
  if (z.real() < 0.0) return 2.0 - erfc_cplx(-z, cfg);
  // erfc(z) = exp(-z^2) w(iz); Im(iz) = Re z >= 0.
  return std::exp(-z * z) * faddeeva_w(std::complex<double>(-z.imag(), z.real()));
}

double gamma_pos(double x) {
  require_finite(x, "gamma_pos");
  if (x <= 0.0) throw DomainError("gamma_pos: argument must be > 0");
  return std::tgamma(x);
}

}  // namespace cone
