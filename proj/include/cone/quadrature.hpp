#pragma once

#include <span>
#include <vector>

namespace cone::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, computed once per n and cached.
const GaussRule& gauss_legendre(int n);

/// The 16-point rule used by all composite panels in this library.
const GaussRule& panel_rule();

/// Composite rule: appends mapped nodes/weights of `rule` on every
/// consecutive pair of `breaks`.
void append_panels(std::span<const double> breaks, const GaussRule& rule,
                   std::vector<double>& nodes, std::vector<double>& weights);

/// n equal panels on [a, b].
std::vector<double> uniform_breaks(double a, double b, int n);

/// Breakpoints 0, h, 2h, 4h, ... clipped at b (b > 0), then `refine`-fold
/// uniform subdivision of each panel.
std::vector<double> graded_breaks(double h, double b, int refine = 1);

}  // namespace cone::quad
