// Acceptance run: one PASS/FAIL line per criterion, each with its runtime budget.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cone/asymptotic_eval.hpp"
#include "cone/contour_eval.hpp"
#include "cone/harness.hpp"
#include "cone/series_eval.hpp"
#include "cone/specfun.hpp"

using namespace cone;
using std::numbers::pi;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// rho = 1 and rho = 1/2 closure grid: 20 log points on [0.1, 25] and 32 directions.
GridSpec closure_grid(double rho) {
  GridSpec g;
  g.rho_list = {rho};
  g.x_min = 0.1;
  g.x_max = 25;
  g.x_count = 20;
  g.eta_count = 32;
  g.include_interface = true;
  return g;
}

Outcome jacobi_anger() {
  const ConeGeometry g(1);
  const GridSpec grid = closure_grid(1);
  const auto etas = grid.etas(g);
  double es = 0, ec = 0;
  for (double x : grid.xs()) {
    const auto s = s_series_multi(x, etas, g);
    for (std::size_t k = 0; k < etas.size(); ++k) {
      const cplx exact = std::polar(1.0, x * std::cos(etas[k]));
      es = std::max(es, std::abs(s[k].value - exact));
      if (x <= 20) ec = std::max(ec, std::abs(s_contour(x, etas[k], g).value - exact));
    }
  }
  return {es <= 1e-9 && ec <= 1e-8, fmt("series max %.2e (<= 1e-9), contour max %.2e (<= 1e-8)", es, ec)};
}

Outcome half_cone() {
  const ConeGeometry g(0.5);
  const GridSpec grid = closure_grid(0.5);
  const auto etas = grid.etas(g);
  double e = 0;
  for (double x : grid.xs()) {
    const auto s = s_series_multi(x, etas, g);
    for (std::size_t k = 0; k < etas.size(); ++k) e = std::max(e, std::abs(s[k].value - std::cos(x * std::cos(etas[k]))));
  }
  return {e <= 1e-9, fmt("max %.2e (<= 1e-9)", e)};
}

Outcome images() {
  Outcome o;
  for (int n : {1, 2, 3, 5}) {
    const Report r = images_check(n, GridSpec{}, 1e-8);
    const double d = r.summary["max_diff"].get<double>();
    o.ok = o.ok && r.pass && d <= 1e-8;
    o.detail += fmt("N=%g %.2e  ", n, d);
  }
  o.detail += "(<= 1e-8)";
  return o;
}

Outcome mutual_oracle() {
  Outcome o;
  double worst_ratio = 0, worst = 0;
  for (double rho : {1.0 / 3, 0.7, 1.0, 1.41421356, 2.5}) {
    const ConeGeometry g(rho);
    GridSpec grid;
    grid.rho_list = {rho};
    grid.eta_count = 24;
    grid.include_interface = true;
    const auto etas = grid.etas(g);
    for (double x : grid.xs()) {
      const auto s = s_series_multi(x, etas, g);
      for (std::size_t k = 0; k < etas.size(); ++k) {
        const EvalResult c = s_contour(x, etas[k], g);
        const double d = std::abs(s[k].value - c.value);
        const double allowed = 1e-6 + s[k].abs_err + c.abs_err;
        worst = std::max(worst, d);
        worst_ratio = std::max(worst_ratio, d / allowed);
        o.ok = o.ok && d <= allowed;
      }
    }
  }
  o.detail = fmt("max |series - contour| %.2e, worst diff/allowed %.2e", worst, worst_ratio);
  return o;
}

Outcome uniform_accuracy() {
  Outcome o;
  OrderCheckConfig cfg;
  cfg.kmax = 1;
  for (double rho : {0.75, 1.2}) {
    for (double eta : {0.6, 1.0}) {
      const ConeGeometry g(rho);
      const double e100 = std::abs(s_uniform(100, eta, g, 1).value - s_series(100, eta, g).value);
      const Report r = order_check(g, eta, OrderMode::large_x, cfg);
      const double slope = r.summary["slope"].get<double>();
      o.ok = o.ok && e100 <= 1e-5 && std::abs(slope + 2.5) <= 0.3;
      o.detail += fmt("rho=%g eta=%g: err(100) %.2e", rho, eta, e100) + fmt(" slope %.3f; ", slope);
    }
  }
  o.detail += "(<= 1e-5, -2.5 +- 0.3)";
  return o;
}

Outcome small_x_order() {
  Outcome o;
  const double eta = 0.7;
  const Report a = order_check(ConeGeometry(1.0 / 3), eta, OrderMode::small_x);
  const Report b = order_check(ConeGeometry(2), eta, OrderMode::small_x);
  const double sa = a.summary["slope"].get<double>(), sb = b.summary["slope"].get<double>();
  o.ok = std::abs(sa - 2) <= 0.2 && std::abs(sb - 0.5) <= 0.2;
  int violations = 0, checked = 0;
  for (double rho : {1.0 / 3, 0.7, 2.0, 2.5}) {
    const ConeGeometry g(rho);
    for (double e : {0.0, 0.7, 2.0, -1.1}) {
      for (int i = 0; i <= 24; ++i) {
        const double x = 1e-3 * std::pow(1.9 / 1e-3, i / 24.0);
        const EvalResult sm = s_small_x(x, e, g);
        const double err = std::abs(s_series(x, e, g).value - sm.value);
        ++checked;
        if (err > sm.abs_err) ++violations;
      }
    }
  }
  o.ok = o.ok && violations == 0;
  o.detail = fmt("slope rho=1/3 %.3f (2 +- 0.2), rho=2 %.3f (0.5 +- 0.2), ", sa, sb) +
             fmt("majorant violations %g of %g", violations, checked);
  return o;
}

Outcome dispersive() {
  Outcome o;
  GridSpec grid;
  grid.spacing = Spacing::linear;
  grid.x_min = 0;
  grid.x_max = 500;
  grid.x_count = 100;
  grid.eta_count = 48;
  grid.include_interface = true;
  for (double rho : {1.0 / 3, 0.9, 2.0}) {
    const Report r = dispersive_scan(ConeGeometry(rho), grid);
    const double lo = r.summary["sup_lower_half"].get<double>(), hi = r.summary["sup_upper_half"].get<double>();
    const double sup = r.summary["sup_abs_S"].get<double>();
    o.ok = o.ok && std::isfinite(sup) && hi <= 1.05 * lo;
    o.detail += fmt("rho=%.3g sup %.4f upper/lower %.4f; ", rho, sup, hi / lo);
  }
  for (double rho : {1.0, 0.5}) {
    const double sup = dispersive_scan(ConeGeometry(rho), grid).summary["sup_abs_S"].get<double>();
    o.ok = o.ok && std::abs(sup - 1) <= 1e-6;
    o.detail += fmt("rho=%g sup-1 %.1e; ", rho, sup - 1);
  }
  return o;
}

Outcome b0_cross() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ur(0.3, 3.0), ue(-pi, pi);
  std::uniform_int_distribution<int> sign(0, 1);
  double worst = 0;
  for (int n = 0; n < 20;) {
    const ConeGeometry g(ur(rng));
    const double eta = ue(rng);
    const int alpha = sign(rng) ? 1 : -1, beta = sign(rng) ? 1 : -1;
    if (interface_distance(eta, g) < 0.05) continue;
    ++n;
    const cplx closed = b0_closed_form(eta, g, alpha, beta);
    const cplx cauchy = b_cauchy(eta, g, alpha, beta, 0).coeffs[0];
    worst = std::max(worst, std::abs(closed - cauchy));
  }
  double cancel = 0;
  const ConeGeometry half(0.5);
  for (double eta : {0.3, 0.6, 1.0, 2.2, -0.8}) {
    for (int beta : {1, -1}) {
      cancel = std::max(cancel, std::abs(b0_closed_form(eta, half, 1, beta) + b0_closed_form(eta, half, -1, beta)));
    }
  }
  o.ok = worst <= 1e-8 && cancel <= 1e-9;
  o.detail = fmt("closed vs Cauchy %.2e (<= 1e-8), rho=1/2 alpha-sum %.2e (<= 1e-9)", worst, cancel);
  return o;
}

Outcome special_functions() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unu(0.0, 40.0), ux(0.05, 60.0);
  double rec = 0;
  for (int i = 0; i < 200; ++i) {
    const double nu = unu(rng) + 1, x = ux(rng);  // nu - 1 stays >= 0
    const double jn = bessel_j(nu, x);
    const double r = bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - 2 * nu / x * jn;
    rec = std::max(rec, std::abs(r) / std::max(1.0, std::abs(jn)));
  }
  double refl = 0;
  for (int s : {1, -1}) {
    const cplx dir = std::polar(1.0, s * pi / 4);
    for (int i = 1; i <= 400; ++i) {
      const cplx z = dir * (4.0 * i / 400);
      refl = std::max(refl, std::abs(erfc_cplx(z) + erfc_cplx(-z) - 2.0));
    }
  }
  return {rec <= 1e-9 && refl <= 1e-12, fmt("recurrence %.2e (<= 1e-9), erfc reflection %.2e (<= 1e-12)", rec, refl)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Jacobi-Anger closure", 10, jacobi_anger},
      {2, "half-cone closure", 10, half_cone},
      {3, "method of images", 20, images},
      {4, "series-contour mutual oracle", 60, mutual_oracle},
      {5, "uniform expansion accuracy", 60, uniform_accuracy},
      {6, "small-x order and majorant", 10, small_x_order},
      {7, "dispersive boundedness", 60, dispersive},
      {8, "b0 cross-oracle", 5, b0_cross},
      {9, "special-function floor", 5, special_functions},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s %d %s: %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
