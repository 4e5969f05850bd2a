#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlgrad {

enum class KernelFamily { Constant, Fractional, SineExample, Tabulated };

std::string to_string(KernelFamily family);
KernelFamily family_from_string(const std::string& name);

/// Shape p(rho) of a radial kernel on the unit interval, before any
/// normalization or horizon scaling. Zero for rho > 1.
///
///   Constant      p = 1
///   Fractional    p = rho^-beta, 1 <= beta < 2
///   SineExample   p = sin(pi rho)
///   Tabulated     piecewise linear through user values on a radial mesh
class KernelProfile {
 public:
  static KernelProfile constant();
  static KernelProfile fractional(double beta);
  static KernelProfile sine_example();
  /// `radii` strictly increasing in [0, 1] and ending at 1; `values` >= 0.
  /// Constant extrapolation below the first radius.
  static KernelProfile tabulated(std::vector<double> radii, std::vector<double> values);

  KernelFamily family() const { return family_; }
  double beta() const { return beta_; }

  double operator()(double rho) const;

  /// inf of p over [0, upto].
  double infimum(double upto) const;
  bool non_increasing() const;

  /// Radii where p is not smooth (tabulated mesh nodes); empty otherwise.
  std::span<const double> breakpoints() const;
  std::span<const double> table_values() const;

 private:
  KernelFamily family_ = KernelFamily::Constant;
  double beta_ = 0.0;
  std::shared_ptr<const std::vector<double>> radii_;
  std::shared_ptr<const std::vector<double>> values_;
};

/// Geometric mesh on [0, 1] clustered at 0: {0, q^(n-2), ..., q, 1}.
std::vector<double> graded_mesh(int count, double ratio);

/// Which moment the constant `normalization()` fixes.
enum class Normalization {
  FirstMoment,   ///< int_{|x|<=1} w(|x|)|x| dx = d
  UnitMass,      ///< int_{|x|<=1} w(|x|) dx = 1
  SecondMoment,  ///< int_{|x|<=1} w(|x|)|x|^2 dx = 1
};

/// Radial kernel w_delta(r) = delta^-(d+p) c p(r/delta), supported on the
/// closed ball of radius delta, where p = 1 for the first-moment
/// normalization (0 for unit mass, 2 for unit second moment). Immutable.
class KernelSpec {
 public:
  /// Builds a kernel whose constant satisfies the first-moment condition.
  /// The moment is re-checked by quadrature to 1e-10 relative.
  static KernelSpec normalize(const KernelProfile& profile, int dimension, double horizon = 1.0);
  static KernelSpec normalize(const KernelProfile& profile, int dimension, double horizon,
                              Normalization kind);

  const KernelProfile& profile() const { return profile_; }
  KernelFamily family() const { return profile_.family(); }
  int dimension() const { return dimension_; }
  double horizon() const { return horizon_; }
  double normalization() const { return constant_; }
  Normalization normalization_kind() const { return kind_; }
  /// Cutoff radius epsilon of an epsilon_cutoff kernel, 0 otherwise.
  double cutoff() const { return cutoff_; }

  /// True when w has a non-integrable-in-isolation power singularity at 0.
  bool singular() const { return family() == KernelFamily::Fractional && cutoff_ == 0.0; }

  /// delta^-p with p the normalized moment power (1, 0 or 2): the factor in
  /// int_{B_delta} w_delta(|s|) g(s) ds = delta^-p int_{B_1} w(|x|) g(delta x) dx.
  double integral_scale() const;

  /// Unit-scaled kernel c p(rho) (with the cutoff plateau applied).
  double unit(double rho) const;

  /// w_delta(r); exactly 0 for r > delta and +inf at r = 0 for singular kernels.
  double eval(double r) const;

  /// Same profile and constant with a different horizon.
  KernelSpec with_horizon(double horizon) const;

  /// w_delta^eps: equal to w_delta for r > eps and to inf_{|y|<=eps} w_delta(|y|)
  /// on [0, eps]. Requires 0 < eps < delta. Keeps the parent's constant.
  KernelSpec epsilon_cutoff(double eps) const;

  /// Surface measure of the unit sphere S^{d-1} (2, 2 pi, 4 pi).
  static double sphere_measure(int dimension);

  /// Quadrature value of int_{|x|<=1} w(|x|) |x|^power dx for the unit kernel.
  double unit_moment(int power) const;

 private:
  KernelProfile profile_;
  int dimension_ = 1;
  double horizon_ = 1.0;
  double constant_ = 1.0;
  Normalization kind_ = Normalization::FirstMoment;
  double cutoff_ = 0.0;
  double plateau_ = 0.0;
};

}  // namespace nlgrad
