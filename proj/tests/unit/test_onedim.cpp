#include <doctest.h>

#include <cmath>
#include <numbers>

#include <nlgrad/error.hpp>
#include <nlgrad/onedim.hpp>

#include "support.hpp"

using namespace nlgrad;
using std::numbers::pi;

namespace {

// Closed forms for delta = 1, derived by hand from
// rho(a) = 2 a^2 int_0^1 w(b) (w(a) - w(a + b)) db.
double sine_rho(double a) {
  a = std::abs(a);
  return pi * a * a * std::sin(pi * a) + 0.25 * pi * pi * a * a * ((a - 1.0) * std::cos(pi * a) - std::sin(pi * a) / pi);
}
// w = 1 on [0, 1]: the bracket is 1 exactly when a + b > 1.
double constant_rho(double a) { return 2.0 * std::pow(std::abs(a), 3); }
// w = 1/(2 s): rho = (a/2)(-log a - log(1 - a)).
double fractional1_rho(double a) { return 0.5 * a * (-std::log(a) - std::log1p(-a)); }

SpectralField sine_mode(int k) {
  SpectralField u = SpectralField::scalar(1, k);
  u.set(Mode{{k, 0, 0}, 1}, CVecX::Constant(1, cplx(0.0, -0.5)));
  return u;
}

}  // namespace

TEST_CASE("pointwise rho matches the closed forms") {
  for (double a : {0.01, 0.1, 0.25, 0.5, 0.77, 0.99}) {
    CHECK(rho_at(test::sine(1), a) == doctest::Approx(sine_rho(a)).epsilon(1e-10).scale(1e-3));
    CHECK(rho_at(test::constant(1), a) == doctest::Approx(constant_rho(a)).epsilon(1e-11));
    CHECK(rho_at(test::fractional(1.0, 1), a) == doctest::Approx(fractional1_rho(a)).epsilon(1e-10));
    CHECK(rho_via_gradient(test::sine(1), a) == doctest::Approx(sine_rho(a)).epsilon(1e-9).scale(1e-3));
  }
  CHECK(rho_at(test::sine(1), 0.5) == doctest::Approx(3.0 * pi / 16.0).epsilon(1e-12));
  CHECK(rho_at(test::sine(1), 0.1) == doctest::Approx(-0.0138386996573301).epsilon(1e-10));
  CHECK(rho_at(test::sine(1), 0.1) < 0.0);
}

TEST_CASE("rho kernels: support, evenness, mass and nonnegativity") {
  for (const KernelSpec& k : {test::constant(1), test::sine(1), test::constant(1, 0.3)}) {
    const RhoKernel r = rho_from_kernel(k);
    CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho_mass(k) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.value(k.horizon()) == 0.0);
    CHECK(r.value(2.0 * k.horizon()) == 0.0);
    CHECK(r.value(-0.4 * k.horizon()) == r.value(0.4 * k.horizon()));
    REQUIRE(r.k_part.size() == r.rho.size());
    for (std::size_t i = 0; i < r.rho.size(); ++i) CHECK(std::abs(r.k_part[i] + r.h_part[i] - r.rho[i]) <= 1e-12);
    if (k.profile().non_increasing())
      for (double v : r.rho) CHECK(v >= 0.0);
  }
  const RhoKernel s = rho_from_kernel(test::sine(1));
  double lo = 0.0;
  for (double v : s.rho) lo = std::min(lo, v);
  CHECK(lo < 0.0);
  CHECK_THROWS_AS(rho_from_kernel(test::fractional(1.0, 1)), NonIntegrable);
  CHECK_THROWS_AS(rho_from_kernel(test::constant(2)), InvalidArgument);
}

TEST_CASE("mesh clusters at both ends") {
  const auto m = rho_mesh(1.0, 64);
  REQUIRE(m.size() == 64);
  CHECK(m.front() > 0.0);
  CHECK(m.back() < 1.0);
  CHECK(m[1] - m[0] < m[32] - m[31]);
  CHECK(m[63] - m[62] < m[32] - m[31]);
}

TEST_CASE("h identity") {
  // Constant: m1 = 1, m2 = 2/3, m0 = 2, so int h = 1 - 4/3.
  const HIdentity c = h_identity(test::constant(1));
  CHECK(c.expected == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(c.integral == doctest::Approx(c.expected).epsilon(1e-10));
  const HIdentity s = h_identity(test::sine(1, 0.5));
  CHECK(s.integral == doctest::Approx(s.expected).epsilon(1e-9));
}

TEST_CASE("regularized path for non-increasing kernels") {
  RhoOptions opts;
  opts.mesh_points = 256;
  const RegularizedRho r = rho_regularized(test::fractional(1.0, 1), {1e-2, 1e-3, 1e-4}, opts);
  REQUIRE(r.stages.size() == 3);
  CHECK(r.monotonicity_violation <= 1e-12);
  for (std::size_t s = 1; s < r.stages.size(); ++s) {
    CHECK(r.stages[s].mass > r.stages[s - 1].mass);
    for (std::size_t i = 0; i < r.limit.rho.size(); ++i)
      CHECK(r.stages[s].rho[i] >= r.stages[s - 1].rho[i] - 1e-12 * std::abs(r.limit.rho[i]));
  }
  // The cutoff mass is (1 - eps/2)^2 for this kernel.
  CHECK(r.stages.front().mass == doctest::Approx(0.990025).epsilon(1e-9));
  CHECK(std::abs(r.extrapolated_mass - 1.0) <= 1e-6);
  CHECK(r.limit.mass == doctest::Approx(1.0).epsilon(1e-8));
  for (std::size_t i = 0; i < r.limit.mesh.size(); i += 17)
    CHECK(r.limit.rho[i] == doctest::Approx(fractional1_rho(r.limit.mesh[i])).epsilon(1e-9));

  // The constant profile is its own cutoff.
  const RegularizedRho c = rho_regularized(test::constant(1), {1e-2, 1e-3, 1e-4}, opts);
  const RhoKernel direct = rho_from_kernel(test::constant(1), opts);
  for (std::size_t i = 0; i < direct.rho.size(); ++i) CHECK(c.stages.front().rho[i] == direct.rho[i]);

  CHECK_THROWS_AS(rho_regularized(test::sine(1), {1e-2, 1e-3}, opts), InvalidArgument);
}

TEST_CASE("energy equivalence") {
  for (const KernelSpec& k : {test::constant(1), test::sine(1), test::fractional(1.0, 1), test::constant(1, 0.4)}) {
    const EnergyCheck e = energy_equivalence_check(k, sine_mode(1));
    CHECK(e.gap <= 1e-6);
    CHECK(e.e_plus == doctest::Approx(e.e_minus).epsilon(1e-12));
  }
  const EnergyCheck z = energy_equivalence_check(test::constant(1), SpectralField::scalar(1, 3));
  CHECK(z.e_plus == 0.0);
  CHECK(z.e_rho == 0.0);
  const EnergyCheck mixed = energy_equivalence_check(test::sine(1), random_field(5, 1, 6, 1, 1.0));
  CHECK(mixed.gap <= 1e-6);
}

TEST_CASE("bond symbol of rho equals -|lambda+|^2") {
  for (double xi : {0.5, 3.0, 25.0}) {
    for (const KernelSpec& k : {test::constant(1), test::sine(1), test::fractional(1.0, 1)}) {
      const double expected = -std::norm(one_sided_symbol(k, xi));
      CHECK(rho_bond_symbol(k, xi) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
  // Constant kernel: lambda+ = 2 (e^{i xi} - 1)/(i xi) - 2.
  const cplx i(0.0, 1.0);
  const double xi = 2.0;
  const cplx l = 2.0 * (std::exp(i * xi) - 1.0) / (i * xi) - 2.0;
  CHECK(std::abs(one_sided_symbol(test::constant(1), xi) - l) <= 1e-12);
  CHECK(std::abs(one_sided_symbol(test::constant(1), xi, -1) + std::conj(l)) <= 1e-12);
}

TEST_CASE("weighted integrals") {
  // 2 int_0^1 a^2 * 2a^3 da = 2/3.
  CHECK(rho_weighted_integral(test::constant(1), [](double a) { return a * a; }) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}
