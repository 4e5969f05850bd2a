#include "nlgrad/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlgrad/error.hpp"
#include "nlgrad/gauss_legendre.hpp"
#include "nlgrad/quadrature.hpp"

namespace nlgrad {
namespace {

constexpr double kPi = std::numbers::pi;

// int_0^1 rho^n sin(pi rho) d rho via S_n = 1/pi - n(n-1)/pi^2 S_{n-2}.
double sine_moment(int n) {
  if (n == 0) return 2.0 / kPi;
  if (n == 1) return 1.0 / kPi;
  return 1.0 / kPi - n * (n - 1) / (kPi * kPi) * sine_moment(n - 2);
}

double tabulated_moment(const KernelProfile& p, int n) {
  auto radii = p.breakpoints();
  auto values = p.table_values();
  // constant extrapolation on [0, radii[0]]
  double total = values[0] * std::pow(radii[0], n + 1) / (n + 1);
  const GaussRule& g = gauss_legendre(4);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const double a = radii[i], b = radii[i + 1];
    const double h = b - a;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double x = a + 0.5 * h * (g.nodes[q] + 1.0);
      total += 0.5 * h * g.weights[q] * p(x) * std::pow(x, n);
    }
  }
  return total;
}

// int_0^1 p(rho) rho^n d rho in closed form where available.
double profile_moment(const KernelProfile& p, int n) {
  switch (p.family()) {
    case KernelFamily::Constant:
      return 1.0 / (n + 1);
    case KernelFamily::Fractional:
      if (n + 1 - p.beta() <= 0.0)
        throw NonIntegrable("fractional kernel moment diverges for this dimension/normalization");
      return 1.0 / (n + 1 - p.beta());
    case KernelFamily::SineExample:
      return sine_moment(n);
    case KernelFamily::Tabulated:
      return tabulated_moment(p, n);
  }
  return 0.0;
}

int moment_power(Normalization kind) {
  switch (kind) {
    case Normalization::FirstMoment:
      return 1;
    case Normalization::UnitMass:
      return 0;
    case Normalization::SecondMoment:
      return 2;
  }
  return 1;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Constant:
      return "Constant";
    case KernelFamily::Fractional:
      return "Fractional";
    case KernelFamily::SineExample:
      return "SineExample";
    case KernelFamily::Tabulated:
      return "Tabulated";
  }
  return "?";
}

KernelFamily family_from_string(const std::string& name) {
  if (name == "Constant" || name == "constant") return KernelFamily::Constant;
  if (name == "Fractional" || name == "fractional") return KernelFamily::Fractional;
  if (name == "SineExample" || name == "sine" || name == "Sine") return KernelFamily::SineExample;
  if (name == "Tabulated" || name == "tabulated") return KernelFamily::Tabulated;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

KernelProfile KernelProfile::constant() { return KernelProfile{}; }

KernelProfile KernelProfile::fractional(double beta) {
  if (!(beta >= 1.0 && beta < 2.0)) throw InvalidArgument("fractional exponent beta must lie in [1, 2)");
  KernelProfile p;
  p.family_ = KernelFamily::Fractional;
  p.beta_ = beta;
  return p;
}

KernelProfile KernelProfile::sine_example() {
  KernelProfile p;
  p.family_ = KernelFamily::SineExample;
  return p;
}

KernelProfile KernelProfile::tabulated(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() < 2 || radii.size() != values.size())
    throw InvalidArgument("tabulated kernel needs matching radii/values with at least two entries");
  if (radii.front() < 0.0 || std::abs(radii.back() - 1.0) > 1e-14)
    throw InvalidArgument("tabulated kernel radii must start in [0,1) and end at 1");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw InvalidArgument("tabulated kernel radii must be strictly increasing");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("tabulated kernel values must be non-negative");
  radii.back() = 1.0;
  KernelProfile p;
  p.family_ = KernelFamily::Tabulated;
  p.radii_ = std::make_shared<const std::vector<double>>(std::move(radii));
  p.values_ = std::make_shared<const std::vector<double>>(std::move(values));
  return p;
}

double KernelProfile::operator()(double rho) const {
  if (rho > 1.0 || rho < 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::Constant:
      return 1.0;
    case KernelFamily::Fractional:
      return rho == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(rho, -beta_);
    case KernelFamily::SineExample:
      return std::sin(kPi * rho);
    case KernelFamily::Tabulated: {
      const auto& r = *radii_;
      const auto& v = *values_;
      if (rho <= r.front()) return v.front();
      auto it = std::upper_bound(r.begin(), r.end(), rho);
      if (it == r.end()) return v.back();
      const std::size_t i = static_cast<std::size_t>(it - r.begin());
      const double t = (rho - r[i - 1]) / (r[i] - r[i - 1]);
      return (1.0 - t) * v[i - 1] + t * v[i];
    }
  }
  return 0.0;
}

double KernelProfile::infimum(double upto) const {
  upto = std::clamp(upto, 0.0, 1.0);
  switch (family_) {
    case KernelFamily::Constant:
      return 1.0;
    case KernelFamily::Fractional:
      return (*this)(upto);
    case KernelFamily::SineExample:
      return 0.0;  // sin(pi rho) >= 0 on [0,1] and vanishes at 0
    case KernelFamily::Tabulated: {
      double m = std::min((*this)(0.0), (*this)(upto));
      const auto& r = *radii_;
      for (std::size_t i = 0; i < r.size() && r[i] <= upto; ++i) m = std::min(m, (*values_)[i]);
      return m;
    }
  }
  return 0.0;
}

bool KernelProfile::non_increasing() const {
  switch (family_) {
    case KernelFamily::Constant:
    case KernelFamily::Fractional:
      return true;
    case KernelFamily::SineExample:
      return false;
    case KernelFamily::Tabulated:
      return std::is_sorted(values_->rbegin(), values_->rend());
  }
  return false;
}

std::span<const double> KernelProfile::breakpoints() const {
  if (!radii_) return {};
  return {radii_->data(), radii_->size()};
}

std::span<const double> KernelProfile::table_values() const {
  if (!values_) return {};
  return {values_->data(), values_->size()};
}

std::vector<double> graded_mesh(int count, double ratio) {
  if (count < 2 || !(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("graded_mesh needs count >= 2 and ratio in (0,1)");
  std::vector<double> mesh{0.0};
  for (int l = count - 2; l >= 1; --l) mesh.push_back(std::pow(ratio, l));
  mesh.push_back(1.0);
  return mesh;
}

double KernelSpec::sphere_measure(int dimension) {
  switch (dimension) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    case 3:
      return 4.0 * kPi;
    default:
      throw InvalidArgument("dimension must be 1, 2 or 3");
  }
}

KernelSpec KernelSpec::normalize(const KernelProfile& profile, int dimension, double horizon) {
  return normalize(profile, dimension, horizon, Normalization::FirstMoment);
}

KernelSpec KernelSpec::normalize(const KernelProfile& profile, int dimension, double horizon,
                                 Normalization kind) {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("kernel dimension must be 1, 2 or 3");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("kernel horizon must be positive");
  const int power = moment_power(kind);
  const double target = kind == Normalization::FirstMoment ? dimension : 1.0;

  KernelSpec k;
  k.profile_ = profile;
  k.dimension_ = dimension;
  k.horizon_ = horizon;
  k.kind_ = kind;
  const double j = profile_moment(profile, dimension - 1 + power);
  if (!(j > 0.0)) throw InvalidArgument("kernel profile has vanishing moment");
  k.constant_ = target / (sphere_measure(dimension) * j);

  const double check = k.unit_moment(power);
  if (std::abs(check - target) > 1e-10 * target)
    throw QuadratureError("kernel moment check failed: got " + std::to_string(check));
  return k;
}

double KernelSpec::unit(double rho) const {
  if (rho > 1.0 || rho < 0.0) return 0.0;
  if (cutoff_ > 0.0 && rho <= cutoff_ / horizon_) return plateau_;
  return constant_ * profile_(rho);
}

double KernelSpec::eval(double r) const {
  if (r > horizon_ || r < 0.0) return 0.0;
  return unit(r / horizon_) / std::pow(horizon_, dimension_ + moment_power(kind_));
}

double KernelSpec::integral_scale() const { return std::pow(horizon_, -moment_power(kind_)); }

KernelSpec KernelSpec::with_horizon(double horizon) const {
  if (!(horizon > 0.0)) throw InvalidArgument("kernel horizon must be positive");
  if (cutoff_ > 0.0) throw InvalidArgument("cannot rescale an epsilon-cutoff kernel");
  KernelSpec k = *this;
  k.horizon_ = horizon;
  return k;
}

KernelSpec KernelSpec::epsilon_cutoff(double eps) const {
  if (!(eps > 0.0) || !(eps < horizon_)) throw InvalidArgument("epsilon cutoff requires 0 < eps < delta");
  if (cutoff_ > 0.0) throw InvalidArgument("kernel already carries a cutoff");
  // A constant profile is its own infimum, so the cutoff changes nothing.
  if (family() == KernelFamily::Constant) return *this;
  KernelSpec k = *this;
  k.cutoff_ = eps;
  k.plateau_ = constant_ * profile_.infimum(eps / horizon_);
  return k;
}

double KernelSpec::unit_moment(int power) const {
  const RadialRule rule = make_radial_rule(*this, 4, power);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) total += rule.weights[i] * std::pow(rule.nodes[i], power);
  return sphere_measure(dimension_) * total;
}

}  // namespace nlgrad
