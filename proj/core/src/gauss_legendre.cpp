#include "nlgrad/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nlgrad/error.hpp"

namespace nlgrad {
namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
  return *slot;
}

void append_composite(std::span<const double> breaks, int order, int sub, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  const GaussRule& g = gauss_legendre(order);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / sub;
    if (h <= 0.0) continue;
    for (int p = 0; p < sub; ++p) {
      const double mid = breaks[i] + (p + 0.5) * h;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        nodes.push_back(mid + 0.5 * h * g.nodes[q]);
        weights.push_back(0.5 * h * g.weights[q]);
      }
    }
  }
}

std::vector<double> graded_toward_left(double a, double b, double ratio, int levels) {
  std::vector<double> breaks;
  breaks.reserve(levels + 2);
  breaks.push_back(a);
  for (int l = levels; l >= 1; --l) breaks.push_back(a + (b - a) * std::pow(ratio, l));
  breaks.push_back(b);
  return breaks;
}

std::vector<double> graded_toward_right(double a, double b, double ratio, int levels) {
  std::vector<double> breaks;
  breaks.reserve(levels + 2);
  breaks.push_back(a);
  for (int l = 1; l <= levels; ++l) breaks.push_back(b - (b - a) * std::pow(ratio, l));
  breaks.push_back(b);
  return breaks;
}

std::vector<double> graded_both(double a, double b, double ratio, int levels) {
  const double mid = 0.5 * (a + b);
  auto left = graded_toward_left(a, mid, ratio, levels);
  auto right = graded_toward_right(mid, b, ratio, levels);
  left.insert(left.end(), right.begin() + 1, right.end());
  return left;
}

}  // namespace nlgrad
