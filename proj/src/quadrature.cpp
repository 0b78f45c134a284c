#include "cone/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cone::quad {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

const GaussRule& panel_rule() {
  static const GaussRule& rule = gauss_legendre(16);
  return rule;
}

void append_panels(std::span<const double> breaks, const GaussRule& rule,
                   std::vector<double>& nodes, std::vector<double>& weights) {
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      nodes.push_back(mid + half * rule.nodes[i]);
      weights.push_back(half * rule.weights[i]);
    }
  }
}

std::vector<double> uniform_breaks(double a, double b, int n) {
  std::vector<double> breaks(n + 1);
  for (int i = 0; i <= n; ++i) breaks[i] = a + (b - a) * i / n;
  breaks[n] = b;
  return breaks;
}

std::vector<double> graded_breaks(double h, double b, int refine) {
  std::vector<double> coarse{0.0};
  double edge = h;
  while (edge < b) {
    coarse.push_back(edge);
    edge *= 2.0;
  }
  coarse.push_back(b);
  if (refine <= 1) return coarse;
  std::vector<double> fine;
  for (std::size_t p = 0; p + 1 < coarse.size(); ++p) {
    for (int r = 0; r < refine; ++r) {
      fine.push_back(coarse[p] + (coarse[p + 1] - coarse[p]) * r / refine);
    }
  }
  fine.push_back(b);
  return fine;
}

}  // namespace cone::quad
