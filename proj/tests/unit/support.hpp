#pragma once

#include <cmath>
#include <functional>

#include <nlgrad/fields.hpp>
#include <nlgrad/kernels.hpp>
#include <nlgrad/lattice.hpp>
#include <nlgrad/orientation.hpp>

namespace test {

using namespace nlgrad;

inline KernelSpec constant(int dim, double delta = 1.0) {
  return KernelSpec::normalize(KernelProfile::constant(), dim, delta);
}
inline KernelSpec fractional(double beta, int dim, double delta = 1.0) {
  return KernelSpec::normalize(KernelProfile::fractional(beta), dim, delta);
}
inline KernelSpec sine(int dim, double delta = 1.0) {
  return KernelSpec::normalize(KernelProfile::sine_example(), dim, delta);
}

/// Composite Simpson rule, used as an oracle independent of the library's
/// Gauss-Legendre machinery.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline Mode mode2(int a, int b) { return Mode{{a, b, 0}, 2}; }
inline Mode mode3(int a, int b, int c) { return Mode{{a, b, c}, 3}; }

inline RVec vec(std::initializer_list<double> v) {
  RVec r(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

/// Largest per-mode coefficient difference.
inline double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a.coeffs(i) - b.coeffs(i)).cwiseAbs().maxCoeff());
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a.coeffs(i).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace test
