#pragma once

#include <functional>
#include <vector>

#include "nlgrad/kernels.hpp"
#include "nlgrad/lattice.hpp"
#include "nlgrad/orientation.hpp"

namespace nlgrad {

struct QuadratureOptions {
  /// Relative agreement required between two successive refinements.
  double tolerance = 1e-10;
  /// Radial panels per unit length at the coarsest level (0: automatic).
  int panels = 0;
  /// Number of refinement doublings tried before giving up.
  int max_level = 6;
};

/// Radial rule on [0, upper] for the unit kernel:
///   int_0^upper w(rho) rho^(d-1) g(rho) d rho ~= sum_i weights[i] g(nodes[i]),
/// exact in the kernel's singular power. `vanishing_order` j promises
/// g(rho) = O(rho^j) at the origin; the rule divides it out before
/// integrating so singular kernels stay integrable.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Throws NonIntegrable when w rho^(d-1) rho^j is not integrable at 0.
RadialRule make_radial_rule(const KernelSpec& kernel, double panels_per_unit, int vanishing_order = 0,
                            double upper = 1.0);

/// Directions on the half unit sphere around n with their weights
/// (d = 1: the single direction n; d = 2: Gauss-Legendre in the angle
/// from n over (-pi/2, pi/2); d = 3: Gauss-Legendre in the polar angle
/// times the trapezoid rule in azimuth).
struct DirectionRule {
  std::vector<RVec> directions;
  std::vector<double> weights;
};

DirectionRule make_direction_rule(const Orientation& n, int resolution_level, double frequency);

/// Tensor rule over the unit half ball H_n cap B_1.
struct QuadratureRule {
  int dimension = 0;
  int level = 0;
  double tolerance = 0.0;
  RadialRule radial;
  DirectionRule angular;
};

/// Rule resolving integrands that oscillate with unit-scaled angular
/// frequency `frequency` (= delta |xi| for Fourier symbols).
QuadratureRule make_halfball_rule(const KernelSpec& kernel, const Orientation& n, int level, double frequency,
                                  int vanishing_order, const QuadratureOptions& options);

using HalfballIntegrand = std::function<CVec(double radius, const RVec& direction)>;

/// Result of one fixed-level half-ball sum: the value and the absolute
/// sum sum |W| |f| used to scale the refinement test.
struct HalfballSum {
  CVec value;
  double scale = 0.0;
};

/// Half-ball integral evaluated with the rule of a single refinement level.
HalfballSum integrate_halfball_at_level(const KernelSpec& kernel, const Orientation& n, const HalfballIntegrand& f,
                                        int level, const QuadratureOptions& options = {}, double frequency = 0.0,
                                        int vanishing_order = 0);

/// int_{H_n cap B_delta} w_delta(|s|) f(|s|, s/|s|) ds, refined until two
/// successive levels agree to options.tolerance. Throws QuadratureError
/// otherwise.
CVec integrate_halfball(const KernelSpec& kernel, const Orientation& n, const HalfballIntegrand& f,
                        const QuadratureOptions& options = {}, double frequency = 0.0, int vanishing_order = 0);

/// Scalar convenience overload.
double integrate_halfball_scalar(const KernelSpec& kernel, const Orientation& n,
                                 const std::function<double(double, const RVec&)>& f,
                                 const QuadratureOptions& options = {}, double frequency = 0.0,
                                 int vanishing_order = 0);

/// int_a^b w_delta(s) f(s) ds for a one-dimensional kernel, 0 <= a < b <= delta.
/// f(s) = O(s^vanishing_order) at s = 0 is assumed when a = 0.
double integrate_interval(const KernelSpec& kernel, double a, double b, const std::function<double(double)>& f,
                          int vanishing_order = 0, const QuadratureOptions& options = {});

}  // namespace nlgrad
