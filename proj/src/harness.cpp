#include "cone/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "cone/errors.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::ordered_json value_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["re"] = r.value.real();
  j["im"] = r.value.imag();
  j["abs_err"] = r.abs_err;
  j["rigorous"] = r.rigorous;
  if (!r.warning.empty()) j["warning"] = std::string(r.warning);
  return j;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

nlohmann::ordered_json grid_json(const GridSpec& grid) {
  nlohmann::ordered_json j;
  j["rho_list"] = grid.rho_list;
  j["x_min"] = grid.x_min;
  j["x_max"] = grid.x_max;
  j["x_count"] = grid.x_count;
  j["spacing"] = grid.spacing == Spacing::log ? "log" : "linear";
  j["eta_count"] = grid.eta_count;
  j["include_interface"] = grid.include_interface;
  j["random_points"] = grid.random_points;
  j["seed"] = grid.seed;
  return j;
}

}  // namespace

void GridSpec::validate() const {
  if (rho_list.empty()) throw DomainError("GridSpec: rho_list is empty");
  for (double r : rho_list) {
    if (!std::isfinite(r) || r <= 0.0) throw DomainError("GridSpec: every rho must be > 0");
  }
  if (x_count < 2 || eta_count < 2) throw DomainError("GridSpec: counts must be >= 2");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw DomainError("GridSpec: need x_min < x_max");
  }
  if (spacing == Spacing::log ? !(x_min > 0.0) : x_min < 0.0) {
    throw DomainError("GridSpec: x_min must be > 0 (log) or >= 0 (linear)");
  }
  if (random_points < 0) throw DomainError("GridSpec: random_points must be >= 0");
}

std::vector<double> GridSpec::xs() const {
  std::vector<double> out(x_count);
  for (int i = 0; i < x_count; ++i) {
    const double f = double(i) / (x_count - 1);
    out[i] = spacing == Spacing::log ? x_min * std::pow(x_max / x_min, f) : x_min + (x_max - x_min) * f;
  }
  out.front() = x_min;
  out.back() = x_max;
  return out;
}

std::vector<double> GridSpec::etas(const ConeGeometry& g) const {
  std::vector<double> out;
  for (int k = 0; k < eta_count; ++k) {
    const double shift = include_interface ? 0.0 : 0.5;
    const double eta = g.period() * (k + shift) / eta_count;
    if (!include_interface && on_interface(eta, g)) continue;
    out.push_back(eta);
  }
  return out;
}

std::string method_invalid_reason(Method m, double x, double eta, const ConeGeometry& g,
                                  const MethodOptions& opts) {
  switch (m) {
    case Method::series:
      if (series_truncation(x, g, opts.series).first < 0) return "truncation exceeds max_modes";
      return {};
    case Method::contour:
      if (x <= 0.0) return "contour needs x > 0";
      if (x > kContourCeilingX) return "x above contour ceiling";
      return {};
    case Method::small_x:
      if (x >= 2.0) return "small_x needs x < 2";
      return {};
    case Method::uniform:
      if (on_interface(eta, g)) return "on interface";
      if (x < kUniformMinX) return "x below uniform range";
      return {};
    case Method::preliminary:
      if (interface_distance(eta, g) < kPreliminaryMinDistance) return "too close to interface";
      if (x < kUniformMinX) return "x below preliminary range";
      return {};
    case Method::images: {
      const double n = 1.0 / g.rho();
      if (std::abs(n - std::round(n)) > 1e-12) return "images needs rho = 1/N";
      return {};
    }
  }
  return "unknown method";
}

Method auto_method(double x, double eta, const ConeGeometry& g, const MethodOptions& opts) {
  if (x < 2.0 && s_small_x(x, eta, g).abs_err <= opts.small_x_tol) return Method::small_x;
  if (x > kUniformMinX && !on_interface(eta, g)) return Method::uniform;
  if (x > 0.0 && x <= kContourCeilingX) return Method::contour;
  return Method::series;
}

EvalResult evaluate_s(Method m, double x, double eta, const ConeGeometry& g, const MethodOptions& opts) {
  const std::string why = method_invalid_reason(m, x, eta, g, opts);
  if (!why.empty() && m != Method::series) throw ValidityError(std::string(method_name(m)) + ": " + why);
  switch (m) {
    case Method::series: return s_series(x, eta, g, opts.series);
    case Method::contour: return s_contour(x, eta, g, opts.contour);
    case Method::small_x: return s_small_x(x, eta, g);
    case Method::uniform: return s_uniform(x, eta, g, opts.kmax);
    case Method::preliminary: return s_preliminary(x, eta, g);
    case Method::images: {
      const int n = int(std::lround(1.0 / g.rho()));
      cplx sum{};
      for (int j = 0; j < n; ++j) sum += g.rho() * std::polar(1.0, x * std::cos(eta - 2.0 * kPi * j / n));
      return {sum, 0.0, Method::images, true};
    }
  }
  throw DomainError("evaluate_s: unknown method");
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["params"] = params;
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const Record& r : records) {
    nlohmann::ordered_json rj;
    rj["rho"] = r.rho;
    rj["x"] = r.x;
    rj["eta"] = r.eta;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const MethodValue& v : r.values) vals[std::string(method_name(v.method))] = value_json(v.result);
    rj["values"] = vals;
    nlohmann::ordered_json inv = nlohmann::ordered_json::object();
    for (const auto& [m, why] : r.invalid) inv[std::string(method_name(m))] = why;
    rj["invalid"] = inv;
    nlohmann::ordered_json diffs = nlohmann::ordered_json::array();
    for (const PairDiff& d : r.diffs) {
      nlohmann::ordered_json dj;
      dj["a"] = std::string(method_name(d.a));
      dj["b"] = std::string(method_name(d.b));
      dj["diff"] = d.diff;
      dj["allowed"] = d.allowed;
      dj["pass"] = d.pass;
      diffs.push_back(dj);
    }
    rj["diffs"] = diffs;
    rj["pass"] = r.pass;
    recs.push_back(rj);
  }
  j["records"] = recs;
  j["summary"] = summary;
  j["pass"] = pass;
  return j;
}

Report compare(const GridSpec& grid, double tol, const MethodOptions& opts) {
  grid.validate();
  if (!(tol >= 0.0)) throw DomainError("compare: tol must be >= 0");
  Report rep;
  rep.kind = "compare";
  rep.params["grid"] = grid_json(grid);
  rep.params["tol"] = tol;
  rep.params["kmax"] = opts.kmax;

  std::mt19937_64 rng(grid.seed);
  std::vector<double> all_diffs;
  std::map<std::string, double> pair_max;
  int failed = 0;
  int empty = 0;
  constexpr Method kMethods[] = {Method::series, Method::contour, Method::small_x, Method::uniform};

  for (double rho : grid.rho_list) {
    const ConeGeometry g(rho);
    std::vector<std::pair<double, double>> points;
    for (double x : grid.xs()) {
      for (double eta : grid.etas(g)) points.emplace_back(x, eta);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < grid.random_points; ++i) {
      const double u = unit(rng);
      const double x = grid.spacing == Spacing::log ? grid.x_min * std::pow(grid.x_max / grid.x_min, u)
                                                    : grid.x_min + (grid.x_max - grid.x_min) * u;
      points.emplace_back(x, g.period() * unit(rng));
    }

    for (const auto& [x, eta] : points) {
      Record rec;
      rec.rho = rho;
      rec.x = x;
      rec.eta = eta;
      for (Method m : kMethods) {
        const std::string why = method_invalid_reason(m, x, eta, g, opts);
        if (!why.empty()) {
          rec.invalid.emplace_back(m, why);
          continue;
        }
        try {
          rec.values.push_back({m, evaluate_s(m, x, eta, g, opts)});
        } catch (const AccuracyError& e) {
          rec.invalid.emplace_back(m, e.what());
        } catch (const GeometryError& e) {
          rec.invalid.emplace_back(m, e.what());
        }
      }
      if (rec.values.empty()) ++empty;
      for (std::size_t a = 0; a < rec.values.size(); ++a) {
        for (std::size_t b = a + 1; b < rec.values.size(); ++b) {
          PairDiff d;
          d.a = rec.values[a].method;
          d.b = rec.values[b].method;
          d.diff = std::abs(rec.values[a].result.value - rec.values[b].result.value);
          d.allowed = tol + rec.values[a].result.abs_err + rec.values[b].result.abs_err;
          d.pass = d.diff <= d.allowed;
          rec.pass = rec.pass && d.pass;
          all_diffs.push_back(d.diff);
          double& pm = pair_max[std::string(method_name(d.a)) + "-" + std::string(method_name(d.b))];
          pm = std::max(pm, d.diff);
          rec.diffs.push_back(d);
        }
      }
      if (!rec.pass) ++failed;
      rep.records.push_back(std::move(rec));
    }
  }
  rep.pass = failed == 0;
  rep.summary["n_records"] = rep.records.size();
  rep.summary["n_failed"] = failed;
  rep.summary["n_without_valid_method"] = empty;
  rep.summary["max_diff"] = all_diffs.empty() ? 0.0 : *std::max_element(all_diffs.begin(), all_diffs.end());
  rep.summary["median_diff"] = median(all_diffs);
  nlohmann::ordered_json by_pair = nlohmann::ordered_json::object();
  for (const auto& [k, v] : pair_max) by_pair[k] = v;
  rep.summary["max_diff_by_pair"] = by_pair;
  return rep;
}

Report images_check(int N, const GridSpec& grid, double tol, const MethodOptions& opts) {
  if (N < 1) throw DomainError("images_check: N must be >= 1");
  grid.validate();
  const ConeGeometry g(1.0 / N);
  Report rep;
  rep.kind = "images_check";
  rep.params["N"] = N;
  rep.params["tol"] = tol;
  rep.params["grid"] = grid_json(grid);

  double max_diff = 0.0;
  const std::vector<double> etas = grid.etas(g);
  for (double x : grid.xs()) {
    const std::vector<EvalResult> s = s_series_multi(x, etas, g, opts.series);
    for (std::size_t e = 0; e < etas.size(); ++e) {
      // t = 1, r1 = r2 = sqrt(2x) gives r1 r2 / 2t = x.
      KernelQuery q{1.0, std::sqrt(2.0 * x), etas[e], std::sqrt(2.0 * x), 0.0};
      if (x == 0.0) q.r1 = q.r2 = 1e-300;
      const EvalResult k = assemble_kernel(s[e], q, g);
      const cplx closed = images_closed_form(q, N);
      Record rec;
      rec.rho = g.rho();
      rec.x = x;
      rec.eta = etas[e];
      rec.values.push_back({Method::series, k});
      rec.values.push_back({Method::images, {closed, 0.0, Method::images, true}});
      PairDiff d{Method::series, Method::images, std::abs(k.value - closed), tol, true};
      d.pass = d.diff <= tol;
      rec.pass = d.pass;
      rec.diffs.push_back(d);
      max_diff = std::max(max_diff, d.diff);
      rep.pass = rep.pass && d.pass;
      rep.records.push_back(std::move(rec));
    }
  }
  rep.summary["n_records"] = rep.records.size();
  rep.summary["max_diff"] = max_diff;
  return rep;
}

Report dispersive_scan(const ConeGeometry& g, const GridSpec& grid, const MethodOptions& opts) {
  grid.validate();
  Report rep;
  rep.kind = "dispersive_scan";
  rep.params["rho"] = g.rho();
  rep.params["grid"] = grid_json(grid);
  rep.params["kmax"] = opts.kmax;

  const std::vector<double> etas = grid.etas(g);
  const double mid = 0.5 * (grid.x_min + grid.x_max);
  double sup = 0.0, sup_lower = 0.0, sup_upper = 0.0;
  double arg_x = 0.0, arg_eta = 0.0;
  for (double x : grid.xs()) {
    std::vector<EvalResult> values(etas.size());
    std::vector<double> series_etas;
    std::vector<std::size_t> series_idx;
    for (std::size_t e = 0; e < etas.size(); ++e) {
      if (x > kUniformMinX && !on_interface(etas[e], g)) {
        values[e] = s_uniform(x, etas[e], g, opts.kmax);
      } else {
        series_etas.push_back(etas[e]);
        series_idx.push_back(e);
      }
    }
    if (!series_etas.empty()) {
      const std::vector<EvalResult> s = s_series_multi(x, series_etas, g, opts.series);
      for (std::size_t i = 0; i < s.size(); ++i) values[series_idx[i]] = s[i];
    }
    for (std::size_t e = 0; e < etas.size(); ++e) {
      const double mag = std::abs(values[e].value);
      if (mag > sup) {
        sup = mag;
        arg_x = x;
        arg_eta = etas[e];
      }
      (x > mid ? sup_upper : sup_lower) = std::max(x > mid ? sup_upper : sup_lower, mag);
      Record rec;
      rec.rho = g.rho();
      rec.x = x;
      rec.eta = etas[e];
      rec.values.push_back({values[e].method, values[e]});
      rep.records.push_back(std::move(rec));
    }
  }
  const bool bounded = std::isfinite(sup) && sup_upper <= 1.05 * sup_lower;
  rep.pass = bounded;
  rep.summary["sup_abs_S"] = sup;
  rep.summary["sup_abs_tK"] = sup / (4.0 * kPi * g.rho());
  rep.summary["argmax_x"] = arg_x;
  rep.summary["argmax_eta"] = arg_eta;
  rep.summary["sup_lower_half"] = sup_lower;
  rep.summary["sup_upper_half"] = sup_upper;
  rep.summary["verdict"] = bounded ? "bounded" : "growth";
  return rep;
}

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("fit_loglog: need >= 2 matched points");
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::log(ys[i]) - (fit.intercept + fit.slope * std::log(xs[i]));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

Report order_check(const ConeGeometry& g, double eta, OrderMode mode, const OrderCheckConfig& cfg,
                   const MethodOptions& opts) {
  if (cfg.count < 2) throw DomainError("order_check: count must be >= 2");
  Report rep;
  rep.kind = "order_check";
  rep.params["rho"] = g.rho();
  rep.params["eta"] = eta;
  rep.params["mode"] = mode == OrderMode::small_x ? "small_x" : "large_x";
  rep.params["kmax"] = cfg.kmax;

  const bool small = mode == OrderMode::small_x;
  if (!small && on_interface(eta, g)) throw ValidityError("order_check: large_x mode needs eta off the interface");
  if (!small && (cfg.kmax < 0 || cfg.kmax > kMaxTaylorIndex)) throw DomainError("order_check: kmax must lie in [0, 4]");
  const double lo = small ? cfg.small_x_min : cfg.large_x_min;
  const double hi = small ? cfg.small_x_max : cfg.large_x_max;
  const double target = small ? std::min(2.0, 1.0 / g.rho()) : -(2.0 * cfg.kmax + 3.0) / 2.0;
  const double window = small ? cfg.small_window : cfg.large_window;

  std::vector<double> xs, errs;
  for (int i = 0; i < cfg.count; ++i) {
    const double x = lo * std::pow(hi / lo, double(i) / (cfg.count - 1));
    double err = 0.0;
    Record rec;
    rec.rho = g.rho();
    rec.x = x;
    rec.eta = eta;
    if (small) {
      const EvalResult s = s_series(x, eta, g, opts.series);
      err = std::abs(s.value - 1.0);
      rec.values.push_back({Method::series, s});
    } else {
      double sq = 0.0;
      for (double shift : {0.0, 0.5 * kPi}) {
        const EvalResult s = s_series(x + shift, eta, g, opts.series);
        const EvalResult u = s_uniform(x + shift, eta, g, cfg.kmax);
        sq += std::norm(u.value - s.value);
        if (shift == 0.0) {
          rec.values.push_back({Method::series, s});
          rec.values.push_back({Method::uniform, u});
        }
      }
      err = std::sqrt(0.5 * sq);
    }
    rec.diffs.push_back({Method::series, small ? Method::small_x : Method::uniform, err, 0.0, true});
    xs.push_back(x);
    errs.push_back(std::max(err, 1e-300));
    rep.records.push_back(std::move(rec));
  }
  const SlopeFit fit = fit_loglog(xs, errs);
  std::string verdict;
  if (fit.rms_residual > cfg.max_residual) {
    verdict = "inconclusive";
  } else {
    verdict = std::abs(fit.slope - target) <= window ? "pass" : "fail";
  }
  rep.pass = verdict != "fail";
  rep.summary["slope"] = fit.slope;
  rep.summary["target"] = target;
  rep.summary["window"] = window;
  rep.summary["rms_residual"] = fit.rms_residual;
  rep.summary["verdict"] = verdict;
  return rep;
}

}  // namespace cone
