#pragma once

#include <span>
#include <vector>

namespace nlgrad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; thread safe.
const GaussRule& gauss_legendre(int n);

/// Composite rule over consecutive breakpoints: each interval
/// [breaks[i], breaks[i+1]] is split into `sub` equal panels carrying an
/// `order`-point Gauss-Legendre rule. Appends to nodes/weights.
void append_composite(std::span<const double> breaks, int order, int sub,
                      std::vector<double>& nodes, std::vector<double>& weights);

/// Breakpoints a = x_0 < ... < x_L = b, geometrically graded toward `a`
/// (ratio in (0,1); the first interval has length ratio^L (b-a)).
std::vector<double> graded_toward_left(double a, double b, double ratio, int levels);

/// Same, graded toward `b`.
std::vector<double> graded_toward_right(double a, double b, double ratio, int levels);

/// Graded toward both ends, symmetric about the midpoint.
std::vector<double> graded_both(double a, double b, double ratio, int levels);

/// Composite Gauss-Legendre integral of f over the given breakpoints.
template <class F>
double integrate_breaks(F&& f, std::span<const double> breaks, int order, int sub = 1) {
  const GaussRule& g = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double h = (breaks[i + 1] - a) / sub;
    if (h <= 0.0) continue;
    for (int p = 0; p < sub; ++p) {
      const double lo = a + p * h;
      const double mid = lo + 0.5 * h;
      double panel = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) panel += g.weights[q] * f(mid + 0.5 * h * g.nodes[q]);
      total += 0.5 * h * panel;
    }
  }
  return total;
}

}  // namespace nlgrad
