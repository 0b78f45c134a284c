#pragma once

#include <complex>

namespace cone::detail {

/// cot(w) without overflow for large |Im w|.
inline std::complex<double> cot(std::complex<double> w) {
  const std::complex<double> i(0.0, 1.0);
  if (w.imag() >= 0.0) {
    const std::complex<double> e = std::exp(2.0 * i * w);  // |e| <= 1
    return i * (e + 1.0) / (e - 1.0);
  }
  const std::complex<double> e = std::exp(-2.0 * i * w);  // |e| < 1
  return i * (1.0 + e) / (1.0 - e);
}

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(std::complex<double> v) {
    re_ = step(re_, c_re_, v.real());
    im_ = step(im_, c_im_, v.imag());
  }
  std::complex<double> value() const { return {re_ + c_re_, im_ + c_im_}; }

 private:
  static double step(double sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    return t;
  }
  double re_ = 0.0, im_ = 0.0, c_re_ = 0.0, c_im_ = 0.0;
};

}  // namespace cone::detail
