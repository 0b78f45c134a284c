#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cone/asymptotic_eval.hpp"
#include "cone/contour_eval.hpp"
#include "cone/kernel_core.hpp"
#include "cone/series_eval.hpp"

namespace cone {

inline constexpr const char* kSchemaVersion = "1";

/// Large-x expansions are only attempted from this x on.
inline constexpr double kUniformMinX = 40.0;

enum class Spacing { log, linear };

struct GridSpec {
  std::vector<double> rho_list{1.0};
  double x_min = 0.5;
  double x_max = 20.0;
  int x_count = 16;
  Spacing spacing = Spacing::log;
  int eta_count = 16;  // uniform over one period 2 pi rho
  bool include_interface = false;
  int random_points = 0;  // extra uniformly drawn (x, eta) samples per rho
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<double> xs() const;
  /// include_interface: eta_k = 2 pi rho k / n (hits eta = 0).
  /// Otherwise the half-shifted grid, with any interface point dropped.
  std::vector<double> etas(const ConeGeometry& g) const;
};

struct MethodOptions {
  SeriesConfig series{};
  ContourSpec contour{};
  int kmax = kDefaultKmax;
  double small_x_tol = 1e-10;  // auto mode uses small_x only below this bound
};

/// Why `m` may not be used at (x, eta); empty when it is valid.
std::string method_invalid_reason(Method m, double x, double eta, const ConeGeometry& g,
                                  const MethodOptions& opts = {});

/// Auto policy: small_x when its majorant is below small_x_tol, contour on
/// (0, 30], uniform above 40 off the interface, series otherwise.
Method auto_method(double x, double eta, const ConeGeometry& g, const MethodOptions& opts = {});

/// S(x, eta) by the requested method. Throws ValidityError when the method
/// is not valid at the point.
EvalResult evaluate_s(Method m, double x, double eta, const ConeGeometry& g, const MethodOptions& opts = {});

struct MethodValue {
  Method method;
  EvalResult result;
};

struct PairDiff {
  Method a;
  Method b;
  double diff = 0.0;
  double allowed = 0.0;
  bool pass = true;
};

struct Record {
  double rho = 0.0;
  double x = 0.0;
  double eta = 0.0;
  std::vector<MethodValue> values;
  std::vector<std::pair<Method, std::string>> invalid;
  std::vector<PairDiff> diffs;
  bool pass = true;
};

struct Report {
  std::string kind;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<Record> records;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool pass = true;

  nlohmann::ordered_json to_json() const;
};

Report compare(const GridSpec& grid, double tol, const MethodOptions& opts = {});

/// assemble_kernel(s_series) at rho = 1/N against the N-image closed form.
Report images_check(int N, const GridSpec& grid, double tol = 1e-8, const MethodOptions& opts = {});

/// sup |S| over the grid; series up to x = 40, uniform beyond (series on
/// the interface). Verdict: upper-half sup <= 1.05 * lower-half sup.
Report dispersive_scan(const ConeGeometry& g, const GridSpec& grid, const MethodOptions& opts = {});

enum class OrderMode { small_x, large_x };

struct OrderCheckConfig {
  int kmax = 0;
  int count = 16;
  double small_x_min = 1e-3, small_x_max = 0.3;
  double large_x_min = 40.0, large_x_max = 400.0;
  double small_window = 0.2;
  double large_window = 0.3;
  double max_residual = 0.5;  // rms of the log fit above which the verdict is inconclusive
};

/// Least-squares slope of log|error| against log x. Large-x errors are the
/// phase-averaged magnitude sqrt((|e(x)|^2 + |e(x + pi/2)|^2) / 2), which
/// removes the e^{+-ix} beating between the two branch-point terms.
Report order_check(const ConeGeometry& g, double eta, OrderMode mode, const OrderCheckConfig& cfg = {},
                   const MethodOptions& opts = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace cone
