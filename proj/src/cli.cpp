#include "cone/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cone/errors.hpp"

namespace cone {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw DomainError("grid: bad number for " + key + ": " + v);
  }
  if (used != v.size()) throw DomainError("grid: bad number for " + key + ": " + v);
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw DomainError("grid: " + key + " must be an integer");
  return int(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw DomainError("grid: " + key + " must be true or false");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  std::vector<double> rho;
  std::optional<double> t, r1, th1, r2, th2;
  std::string method = "auto";
  std::optional<int> kmax;
  std::optional<double> x_min, x_max;
  std::optional<int> x_count, eta_count, random_points;
  std::optional<std::string> spacing;
  bool include_interface = false;
  std::string out;
  std::string grid;
  std::optional<double> tol;
  int n = 1;
  std::optional<double> eta;
  std::string mode = "small";
  std::uint64_t seed = 1;
  bool quiet = false;
};

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw DomainError(std::string("missing --") + name);
  return *v;
}

double first_rho(const Options& o) {
  if (o.rho.empty()) throw DomainError("missing --rho");
  return o.rho.front();
}

GridSpec grid_from(const Options& o, GridSpec g) {
  if (!o.grid.empty()) g = parse_grid_toml(read_file(o.grid));
  if (!o.rho.empty()) g.rho_list = o.rho;
  if (o.x_min) g.x_min = *o.x_min;
  if (o.x_max) g.x_max = *o.x_max;
  if (o.x_count) g.x_count = *o.x_count;
  if (o.eta_count) g.eta_count = *o.eta_count;
  if (o.random_points) g.random_points = *o.random_points;
  if (o.spacing) {
    if (*o.spacing == "log") g.spacing = Spacing::log;
    else if (*o.spacing == "linear") g.spacing = Spacing::linear;
    else throw DomainError("--spacing must be log or linear");
  }
  if (o.include_interface) g.include_interface = true;
  g.seed = o.seed;
  g.validate();
  return g;
}

MethodOptions method_options(const Options& o) {
  MethodOptions m;
  if (o.kmax) {
    if (*o.kmax < 0 || *o.kmax > kMaxTaylorIndex) throw DomainError("--kmax must lie in [0, 4]");
    m.kmax = *o.kmax;
  }
  return m;
}

int emit_report(const Report& rep, const Options& o, std::ostream& out, std::ostream& err) {
  write_text(o.out, rep.to_json().dump(2) + "\n", out);
  if (!o.quiet) err << rep.kind << ": " << (rep.pass ? "pass" : "FAIL") << " " << rep.summary.dump() << "\n";
  return rep.pass ? kExitPass : kExitCompareFail;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const ConeGeometry g(first_rho(o));
  KernelQuery q{need(o.t, "t"), need(o.r1, "r1"), need(o.th1, "th1"), need(o.r2, "r2"), need(o.th2, "th2")};
  // negative time through K(-t) = conj K(t)
  const bool backward = q.t < 0.0;
  if (backward) q.t = -q.t;
  q.validate();
  const ReducedArgs ra = reduce(q, g);
  const MethodOptions mo = method_options(o);

  EvalResult k;
  if (o.method.rfind("images-", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(o.method.substr(7));
    } catch (const std::exception&) {
      throw DomainError("bad method " + o.method);
    }
    if (n < 1 || std::abs(g.rho() - 1.0 / n) > 1e-12) throw DomainError("images-N needs N >= 1 and rho = 1/N");
    k = {images_closed_form(q, n), 0.0, Method::images, true};
  } else {
    Method m;
    if (o.method == "auto") m = auto_method(ra.x, ra.eta, g, mo);
    else if (o.method == "series") m = Method::series;
    else if (o.method == "contour") m = Method::contour;
    else if (o.method == "small-x") m = Method::small_x;
    else if (o.method == "uniform") m = Method::uniform;
    else throw DomainError("unknown method " + o.method);
    EvalResult s;
    try {
      s = evaluate_s(m, ra.x, ra.eta, g, mo);
    } catch (const GeometryError&) {
      if (o.method != "auto") throw;
      s = evaluate_s(Method::series, ra.x, ra.eta, g, mo);
    }
    k = assemble_kernel(s, q, g);
  }
  if (backward) k.value = std::conj(k.value);

  nlohmann::ordered_json j;
  j["value_re"] = k.value.real();
  j["value_im"] = k.value.imag();
  j["abs_err"] = k.abs_err;
  j["method"] = std::string(method_name(k.method));
  j["x"] = ra.x;
  j["eta"] = ra.eta;
  j["rigorous"] = k.rigorous;
  write_text(o.out, j.dump(2) + "\n", out);
  return kExitPass;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const ConeGeometry g(first_rho(o));
  GridSpec grid = grid_from(o, GridSpec{});
  const MethodOptions mo = method_options(o);
  std::string csv = "rho,x,eta,method,re,im,abs_err\n";
  for (double x : grid.xs()) {
    for (double eta : grid.etas(g)) {
      EvalResult s;
      try {
        s = evaluate_s(auto_method(x, eta, g, mo), x, eta, g, mo);
      } catch (const GeometryError&) {
        s = s_series(x, eta, g, mo.series);
      }
      csv += fmt17(g.rho()) + "," + fmt17(x) + "," + fmt17(eta) + "," + std::string(method_name(s.method)) + "," +
             fmt17(s.value.real()) + "," + fmt17(s.value.imag()) + "," + fmt17(s.abs_err) + "\n";
    }
  }
  write_text(o.out, csv, out);
  return kExitPass;
}

}  // namespace

GridSpec parse_grid_toml(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("grid: line " + std::to_string(lineno) + " is not key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);

    if (key == "rho_list" || key == "rho") {
      g.rho_list.clear();
      if (!val.empty() && val.front() == '[') {
        if (val.back() != ']') throw DomainError("grid: unterminated array");
        std::istringstream items(val.substr(1, val.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
          item = trim(item);
          if (!item.empty()) g.rho_list.push_back(to_double(key, item));
        }
      } else {
        g.rho_list.push_back(to_double(key, val));
      }
    } else if (key == "x_min") {
      g.x_min = to_double(key, val);
    } else if (key == "x_max") {
      g.x_max = to_double(key, val);
    } else if (key == "x_count") {
      g.x_count = to_int(key, val);
    } else if (key == "eta_count") {
      g.eta_count = to_int(key, val);
    } else if (key == "random_points") {
      g.random_points = to_int(key, val);
    } else if (key == "include_interface") {
      g.include_interface = to_bool(key, val);
    } else if (key == "spacing") {
      if (val == "log") g.spacing = Spacing::log;
      else if (val == "linear") g.spacing = Spacing::linear;
      else throw DomainError("grid: spacing must be log or linear");
    } else {
      throw DomainError("grid: unknown key " + key);
    }
  }
  g.validate();
  return g;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schrodinger kernel on a flat cone: evaluation and cross-checks", "conekernel"};
  app.set_config("--config", "", "key = value file mirroring the long flags");
  app.require_subcommand(1);

  Options o;
  app.add_option("--rho", o.rho, "cone parameter; repeatable for compare");
  app.add_option("--t", o.t);
  app.add_option("--r1", o.r1);
  app.add_option("--th1", o.th1);
  app.add_option("--r2", o.r2);
  app.add_option("--th2", o.th2);
  app.add_option("--method", o.method, "auto|series|contour|small-x|uniform|images-N");
  app.add_option("--kmax", o.kmax);
  app.add_option("--x-min", o.x_min);
  app.add_option("--x-max", o.x_max);
  app.add_option("--x-count", o.x_count);
  app.add_option("--eta-count", o.eta_count);
  app.add_option("--spacing", o.spacing, "log|linear");
  app.add_option("--random-points", o.random_points, "extra seeded samples per rho");
  app.add_flag("--include-interface", o.include_interface);
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--grid", o.grid, "grid file (key = value)");
  app.add_option("--tol", o.tol);
  app.add_option("--n", o.n);
  app.add_option("--eta", o.eta);
  app.add_option("--mode", o.mode, "small|large");
  app.add_option("--seed", o.seed);
  app.add_flag("--quiet", o.quiet);

  auto* eval = app.add_subcommand("eval", "kernel value at one point")->fallthrough();
  auto* scan = app.add_subcommand("scan", "S(x, eta) on a grid as CSV")->fallthrough();
  auto* cmp = app.add_subcommand("compare", "cross-validate all valid methods")->fallthrough();
  auto* img = app.add_subcommand("images-check", "series against the N-image closed form")->fallthrough();
  auto* disp = app.add_subcommand("dispersive", "sup |S| scan")->fallthrough();
  auto* ord = app.add_subcommand("orders", "empirical order of the small/large-x error")->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (eval->parsed()) return cmd_eval(o, out);
    if (scan->parsed()) return cmd_scan(o, out);
    if (cmp->parsed()) {
      GridSpec defaults;
      return emit_report(compare(grid_from(o, defaults), o.tol.value_or(1e-6), method_options(o)), o, out, err);
    }
    if (img->parsed()) {
      GridSpec defaults;
      defaults.include_interface = true;
      Options oi = o;
      oi.rho.clear();
      return emit_report(images_check(o.n, grid_from(oi, defaults), o.tol.value_or(1e-8), method_options(o)), o,
                         out, err);
    }
    if (disp->parsed()) {
      GridSpec defaults;
      defaults.x_min = 0.0;
      defaults.x_max = 500.0;
      defaults.x_count = 100;
      defaults.spacing = Spacing::linear;
      defaults.eta_count = 48;
      defaults.include_interface = true;
      const ConeGeometry g(first_rho(o));
      return emit_report(dispersive_scan(g, grid_from(o, defaults), method_options(o)), o, out, err);
    }
    if (ord->parsed()) {
      const ConeGeometry g(first_rho(o));
      OrderMode mode;
      if (o.mode == "small") mode = OrderMode::small_x;
      else if (o.mode == "large") mode = OrderMode::large_x;
      else throw DomainError("--mode must be small or large");
      OrderCheckConfig cfg;
      cfg.kmax = o.kmax.value_or(0);
      return emit_report(order_check(g, need(o.eta, "eta"), mode, cfg, method_options(o)), o, out, err);
    }
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << " (best " << e.best_estimate << ", err " << e.error_estimate << ")\n";
    return kExitAccuracy;
  } catch (const GeometryError& e) {
    err << "accuracy error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const ValidityError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace cone
