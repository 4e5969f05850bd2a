#include "nlgrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlgrad/error.hpp"
#include "nlgrad/gauss_legendre.hpp"

namespace nlgrad {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOrder = 12;

// Smallest integer m <= 64 with m * x integral, or 0.
int rational_multiplier(double x) {
  for (int m = 1; m <= 64; ++m) {
    const double p = m * x;
    if (std::abs(p - std::round(p)) < 1e-12 && std::round(p) >= 1.0) return m;
  }
  return 0;
}

void add_segments(std::vector<double>& breaks, double lo, double hi, double panels_per_unit,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> clipped;
  for (double b : breaks)
    if (b >= lo && b <= hi) clipped.push_back(b);
  for (std::size_t i = 0; i + 1 < clipped.size(); ++i) {
    const double len = clipped[i + 1] - clipped[i];
    const int sub = std::max(1, static_cast<int>(std::ceil(panels_per_unit * len - 1e-9)));
    const double seg[2] = {clipped[i], clipped[i + 1]};
    append_composite(seg, kOrder, sub, nodes, weights);
  }
}

RVec perpendicular2(const RVec& n) {
  RVec p(2);
  p << -n[1], n[0];
  return p;
}

void frame3(const RVec& n, RVec& t1, RVec& t2) {
  Eigen::Vector3d nn(n[0], n[1], n[2]);
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(nn[i]) < std::abs(nn[axis])) axis = i;
  a[axis] = 1.0;
  Eigen::Vector3d u = nn.cross(a).normalized();
  Eigen::Vector3d v = nn.cross(u);
  t1 = RVec(3);
  t2 = RVec(3);
  for (int i = 0; i < 3; ++i) {
    t1[i] = u[i];
    t2[i] = v[i];
  }
}

double magnitude(const CVec& v) { return v.norm(); }

}  // namespace

Orientation::Orientation(const RVec& n) : n_(n) {
  if (n.size() < 1 || n.size() > 3) throw InvalidArgument("orientation dimension must be 1, 2 or 3");
  if (std::abs(n.norm() - 1.0) > 1e-14) throw InvalidArgument("orientation must be a unit vector");
}

Orientation Orientation::normalized(const RVec& v) {
  const double len = v.norm();
  if (!(len > 0.0)) throw InvalidArgument("cannot normalize a zero orientation");
  RVec n = v / len;
  return Orientation(n);
}

Orientation Orientation::angle(double theta) {
  RVec n(2);
  n << std::cos(theta), std::sin(theta);
  return normalized(n);
}

Orientation Orientation::axis(int dim, int axis, double sign) {
  if (axis < 0 || axis >= dim) throw InvalidArgument("axis index out of range");
  RVec n = RVec::Zero(dim);
  n[axis] = sign >= 0 ? 1.0 : -1.0;
  return Orientation(n);
}

RadialRule make_radial_rule(const KernelSpec& kernel, double panels_per_unit, int vanishing_order, double upper) {
  const int d = kernel.dimension();
  const int j = vanishing_order;
  upper = std::min(upper, 1.0);
  RadialRule rule;
  if (!(upper > 0.0)) return rule;
  panels_per_unit = std::max(panels_per_unit, 1.0);

  if (kernel.singular()) {
    // w rho^(d-1) g = c rho^a h(rho) with a = d - 1 - beta + j, h = g / rho^j.
    const double a = d - 1 - kernel.profile().beta() + j;
    if (a <= -1.0) throw NonIntegrable("kernel singularity is not integrable against this integrand");
    // rho = t^m turns rho^a d rho into m t^e dt with e = m (a+1) - 1.
    const int mi = rational_multiplier(a + 1.0);
    const bool smooth = mi > 0;
    const double m = smooth ? mi : std::max(1.0, 1.0 / (a + 1.0));
    const double e = m * (a + 1.0) - 1.0;
    const double t_upper = std::pow(upper, 1.0 / m);
    std::vector<double> breaks{0.0, t_upper};
    if (!smooth) {
      auto g = graded_toward_left(0.0, t_upper, 0.25, 14);
      breaks.insert(breaks.end(), g.begin(), g.end());
    }
    std::vector<double> t_nodes, t_weights;
    add_segments(breaks, 0.0, t_upper, panels_per_unit * m, t_nodes, t_weights);
    const double c = kernel.normalization();
    rule.nodes.reserve(t_nodes.size());
    rule.weights.reserve(t_nodes.size());
    for (std::size_t i = 0; i < t_nodes.size(); ++i) {
      const double t = t_nodes[i];
      const double rho = std::pow(t, m);
      rule.nodes.push_back(rho);
      rule.weights.push_back(c * m * t_weights[i] * std::pow(t, e) / std::pow(rho, j));
    }
    return rule;
  }

  std::vector<double> breaks{0.0, upper};
  for (double r : kernel.profile().breakpoints()) breaks.push_back(r);
  if (kernel.cutoff() > 0.0) {
    const double eps = kernel.cutoff() / kernel.horizon();
    breaks.push_back(eps);
    if (kernel.family() == KernelFamily::Fractional) {
      // Resolve the steep rho^-beta decay just beyond the plateau.
      const int levels = static_cast<int>(std::ceil(3.0 * std::log10(1.0 / eps))) + 1;
      for (int l = 0; l <= levels; ++l) breaks.push_back(eps * std::pow(1.0 / eps, static_cast<double>(l) / levels));
    }
  }
  std::vector<double> nodes, weights;
  add_segments(breaks, 0.0, upper, panels_per_unit, nodes, weights);
  rule.nodes.reserve(nodes.size());
  rule.weights.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double rho = nodes[i];
    rule.nodes.push_back(rho);
    rule.weights.push_back(weights[i] * kernel.unit(rho) * std::pow(rho, d - 1));
  }
  return rule;
}

DirectionRule make_direction_rule(const Orientation& n, int level, double frequency) {
  DirectionRule rule;
  const int d = n.dim();
  const RVec& nv = n.vector();
  if (d == 1) {
    rule.directions.push_back(nv);
    rule.weights.push_back(1.0);
    return rule;
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(frequency / 4.0))) << level;
  if (d == 2) {
    const RVec perp = perpendicular2(nv);
    std::vector<double> th, w;
    const double seg[2] = {-0.5 * kPi, 0.5 * kPi};
    append_composite(seg, kOrder, panels, th, w);
    for (std::size_t i = 0; i < th.size(); ++i) {
      rule.directions.push_back(RVec(std::cos(th[i]) * nv + std::sin(th[i]) * perp));
      rule.weights.push_back(w[i]);
    }
    return rule;
  }
  RVec t1, t2;
  frame3(nv, t1, t2);
  std::vector<double> al, w;
  const double seg[2] = {0.0, 0.5 * kPi};
  append_composite(seg, kOrder, panels, al, w);
  const int azimuth = (16 + 4 * static_cast<int>(std::ceil(frequency))) << level;
  for (std::size_t i = 0; i < al.size(); ++i) {
    const double s = std::sin(al[i]), c = std::cos(al[i]);
    for (int k = 0; k < azimuth; ++k) {
      const double psi = 2.0 * kPi * k / azimuth;
      rule.directions.push_back(RVec(c * nv + s * (std::cos(psi) * t1 + std::sin(psi) * t2)));
      rule.weights.push_back(w[i] * s * 2.0 * kPi / azimuth);
    }
  }
  return rule;
}

QuadratureRule make_halfball_rule(const KernelSpec& kernel, const Orientation& n, int level, double frequency,
                                  int vanishing_order, const QuadratureOptions& options) {
  if (n.dim() != kernel.dimension()) throw InvalidArgument("orientation and kernel dimensions differ");
  QuadratureRule rule;
  rule.dimension = kernel.dimension();
  rule.level = level;
  rule.tolerance = options.tolerance;
  const double base = options.panels > 0 ? options.panels : 2.0;
  rule.radial = make_radial_rule(kernel, (base + 0.5 * frequency) * (1 << level), vanishing_order);
  rule.angular = make_direction_rule(n, level, frequency);
  return rule;
}

HalfballSum integrate_halfball_at_level(const KernelSpec& kernel, const Orientation& n, const HalfballIntegrand& f,
                                        int level, const QuadratureOptions& options, double frequency,
                                        int vanishing_order) {
  const double delta = kernel.horizon();
  const QuadratureRule rule = make_halfball_rule(kernel, n, level, frequency, vanishing_order, options);
  HalfballSum out;
  for (std::size_t i = 0; i < rule.radial.nodes.size(); ++i) {
    const double r = delta * rule.radial.nodes[i];
    for (std::size_t q = 0; q < rule.angular.directions.size(); ++q) {
      const double w = rule.radial.weights[i] * rule.angular.weights[q];
      const CVec v = f(r, rule.angular.directions[q]);
      if (out.value.size() == 0) out.value = CVec::Zero(v.size());
      out.value += w * v;
      out.scale += std::abs(w) * magnitude(v);
    }
  }
  out.value *= kernel.integral_scale();
  out.scale *= kernel.integral_scale();
  return out;
}

CVec integrate_halfball(const KernelSpec& kernel, const Orientation& n, const HalfballIntegrand& f,
                        const QuadratureOptions& options, double frequency, int vanishing_order) {
  HalfballSum previous = integrate_halfball_at_level(kernel, n, f, 0, options, frequency, vanishing_order);
  for (int level = 1; level <= options.max_level; ++level) {
    HalfballSum current = integrate_halfball_at_level(kernel, n, f, level, options, frequency, vanishing_order);
    const double diff = magnitude(current.value - previous.value);
    const double ref = std::max(magnitude(current.value), 1e-6 * current.scale);
    if (diff <= options.tolerance * ref) return current.value;
    previous = std::move(current);
  }
  std::ostringstream msg;
  msg << "half-ball quadrature did not converge to " << options.tolerance << " within " << options.max_level
      << " refinements";
  throw QuadratureError(msg.str());
}

double integrate_halfball_scalar(const KernelSpec& kernel, const Orientation& n,
                                 const std::function<double(double, const RVec&)>& f,
                                 const QuadratureOptions& options, double frequency, int vanishing_order) {
  const CVec v = integrate_halfball(
      kernel, n,
      [&](double r, const RVec& dir) {
        CVec out(1);
        out[0] = f(r, dir);
        return out;
      },
      options, frequency, vanishing_order);
  return v[0].real();
}

double integrate_interval(const KernelSpec& kernel, double a, double b, const std::function<double(double)>& f,
                          int vanishing_order, const QuadratureOptions& options) {
  if (kernel.dimension() != 1) throw InvalidArgument("integrate_interval needs a one-dimensional kernel");
  const double delta = kernel.horizon();
  if (!(a >= 0.0 && b > a && b <= delta * (1.0 + 1e-15))) throw InvalidArgument("interval must satisfy 0 <= a < b <= delta");
  const double lo = a / delta, hi = std::min(b / delta, 1.0);
  const double base = options.panels > 0 ? options.panels : 2.0;

  auto evaluate = [&](int level) {
    const double ppu = base * (1 << level);
    double total = 0.0;
    if (lo == 0.0) {
      const RadialRule rule = make_radial_rule(kernel, ppu, vanishing_order, hi);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) total += rule.weights[i] * f(delta * rule.nodes[i]);
    } else {
      std::vector<double> breaks{lo, hi};
      for (double r : kernel.profile().breakpoints()) breaks.push_back(r);
      if (kernel.cutoff() > 0.0) breaks.push_back(kernel.cutoff() / delta);
      if (kernel.singular()) {
        auto g = graded_toward_left(lo, hi, 0.3, 8);
        breaks.insert(breaks.end(), g.begin(), g.end());
      }
      std::vector<double> nodes, weights;
      add_segments(breaks, lo, hi, ppu, nodes, weights);
      for (std::size_t i = 0; i < nodes.size(); ++i) total += weights[i] * kernel.unit(nodes[i]) * f(delta * nodes[i]);
    }
    return total * kernel.integral_scale();
  };

  double previous = evaluate(0);
  for (int level = 1; level <= options.max_level; ++level) {
    const double current = evaluate(level);
    if (std::abs(current - previous) <= options.tolerance * std::max(std::abs(current), 1e-300)) return current;
    previous = current;
  }
  throw QuadratureError("interval quadrature did not converge");
}

}  // namespace nlgrad
