#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace cone {

using cplx = std::complex<double>;

/// Flat cone over a circle of radius rho (total cone angle 2 pi rho).
class ConeGeometry {
 public:
  explicit ConeGeometry(double rho);
  double rho() const { return rho_; }
  double period() const;  // 2 pi rho

 private:
  double rho_;
};

/// Space-time evaluation point (t, r1, theta1, r2, theta2).
struct KernelQuery {
  double t = 1.0;
  double r1 = 1.0;
  double theta1 = 0.0;
  double r2 = 1.0;
  double theta2 = 0.0;

  void validate() const;
};

/// x = r1 r2 / (2t) and eta = theta1 - theta2 (not reduced).
struct ReducedArgs {
  double x = 0.0;
  double eta = 0.0;
};

/// One element of the pole-phase set: phi = pi/2 + alpha eta + 2 pi rho k
/// in [-pi, pi), with sigma = sgn(cos phi).
struct PolePhase {
  double phi = 0.0;
  long k = 0;
  int alpha = 1;
  int sigma = 1;
  bool on_interface = false;  // |cos phi| < kInterfaceGuard
};

using PolePhaseSet = std::vector<PolePhase>;

inline constexpr double kInterfaceGuard = 1e-14;

enum class Method { series, contour, small_x, uniform, images, preliminary };

std::string_view method_name(Method m);

/// Value with an a-posteriori absolute error estimate.
struct EvalResult {
  cplx value{0.0, 0.0};
  double abs_err = 0.0;
  Method method = Method::series;
  /// False when abs_err is a heuristic rather than a bound.
  bool rigorous = true;
  /// Non-empty when the method ran outside its practical range.
  std::string_view warning{};
};

ReducedArgs reduce(const KernelQuery& q, const ConeGeometry& g);

/// -exp[-i (r1^2 + r2^2) / (4t)] / (4 pi i rho t).
cplx prefactor(const KernelQuery& q, const ConeGeometry& g);

/// Pole phases in [-pi, pi), sorted by phi. alpha must be +1 or -1.
PolePhaseSet pole_phases(const ConeGeometry& g, double eta, int alpha);

/// Distance from eta to the excluded set {-pi, 0, pi} + 2 pi rho Z.
double interface_distance(double eta, const ConeGeometry& g);

/// True when either pole-phase set contains an on-interface phase.
bool on_interface(double eta, const ConeGeometry& g);

/// Multiplies S by the prefactor; abs_err scales by |prefactor|.
EvalResult assemble_kernel(const EvalResult& s, const KernelQuery& q,
                           const ConeGeometry& g);

/// K(-t) = conj(K(t)); convenience for negative times.
cplx conjugate_time(cplx kernel_at_positive_t);

}  // namespace cone
