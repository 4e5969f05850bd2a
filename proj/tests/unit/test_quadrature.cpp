#include <doctest.h>

#include <numbers>
#include <random>

#include <nlgrad/error.hpp>
#include <nlgrad/gauss_legendre.hpp>
#include <nlgrad/quadrature.hpp>

#include "support.hpp"

using namespace nlgrad;
using std::numbers::pi;

namespace {

Orientation first_axis(int d) { return Orientation::axis(d, 0); }

}  // namespace

TEST_CASE("half-ball integral of |s| is half the moment") {
  for (int d = 1; d <= 3; ++d) {
    for (const KernelSpec& k : {test::constant(d, 0.3), test::fractional(1.0, d), test::fractional(1.5, d, 2.0),
                                test::sine(d, 0.7)}) {
      const double v = integrate_halfball_scalar(
          k, first_axis(d), [](double r, const RVec&) { return r; }, {}, 0.0, 1);
      CHECK(v == doctest::Approx(d / 2.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("half-ball integral of 1 for the constant kernel in 2D") {
  // (3/pi) times the half-disk area pi/2.
  const double v = integrate_halfball_scalar(test::constant(2), first_axis(2), [](double, const RVec&) { return 1.0; });
  CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("half-ball integral of s . e1 against closed form and Monte Carlo") {
  const KernelSpec k = test::constant(2);
  const double v = integrate_halfball_scalar(k, first_axis(2), [](double r, const RVec& e) { return r * e(0); });
  // (3/pi) int_{-pi/2}^{pi/2} cos t dt int_0^1 r^2 dr = 2/pi.
  CHECK(v == doctest::Approx(2.0 / pi).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double sum = 0.0;
  const int samples = 400000;
  for (int i = 0; i < samples; ++i) {
    const double x = std::abs(u(rng)), y = u(rng);
    if (x * x + y * y <= 1.0) sum += (3.0 / pi) * x;
  }
  const double mc = 2.0 * sum / samples;  // sampled area of [0,1] x [-1,1] is 2
  CHECK(std::abs(mc - v) < 5e-3);
}

TEST_CASE("orientation does not change rotation-invariant integrals") {
  const KernelSpec k = test::fractional(1.5, 3);
  const auto f = [](double r, const RVec&) { return r * r; };
  const double a = integrate_halfball_scalar(k, Orientation::axis(3, 2), f, {}, 0.0, 1);
  const double b = integrate_halfball_scalar(k, Orientation::normalized(test::vec({1.0, -2.0, 0.5})), f, {}, 0.0, 1);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("interval integrals") {
  const KernelSpec c = test::constant(1);
  CHECK(integrate_interval(c, 0.0, 1.0, [](double s) { return s; }) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(integrate_interval(c, 0.0, 1.0, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
  const KernelSpec f = test::fractional(1.5, 1);
  CHECK(integrate_interval(f, 0.0, 1.0, [](double s) { return s; }, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_interval(f, 0.0, 1.0, [](double) { return 1.0; }), NonIntegrable);
  // Away from the origin nothing is singular: c int_a^b s^-1.5 ds in closed form.
  const double cst = f.normalization();
  const double exact = cst * 2.0 * (std::pow(0.2, -0.5) - std::pow(0.9, -0.5));
  CHECK(integrate_interval(f, 0.2, 0.9, [](double) { return 1.0; }) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("radial rules have positive weights and interior nodes") {
  for (int d = 1; d <= 3; ++d) {
    for (const KernelSpec& k : {test::constant(d), test::fractional(1.7, d), test::sine(d)}) {
      const RadialRule rule = make_radial_rule(k, 4.0, 1);
      REQUIRE_FALSE(rule.nodes.empty());
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        CHECK(rule.weights[i] > 0.0);
        CHECK(rule.nodes[i] > 0.0);
        CHECK(rule.nodes[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("non-integrable pairs are rejected") {
  // w ~ r^-1.5 in one dimension without a vanishing integrand.
  CHECK_THROWS_AS(make_radial_rule(test::fractional(1.5, 1), 4.0, 0), NonIntegrable);
  CHECK_NOTHROW(make_radial_rule(test::fractional(1.5, 2), 4.0, 0));
}

TEST_CASE("unreachable tolerance raises QuadratureError") {
  QuadratureOptions opts;
  opts.tolerance = 1e-30;
  opts.max_level = 1;
  const auto f = [](double r, const RVec& e) { return std::sin(40.0 * r * e(1)) + std::cos(7.0 * r); };
  CHECK_THROWS_AS(integrate_halfball_scalar(test::constant(2), first_axis(2), f, opts, 40.0), QuadratureError);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 12, 20}) {
    const GaussRule& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("graded breakpoints") {
  const auto b = graded_both(0.0, 1.0, 0.25, 4);
  CHECK(b.front() == 0.0);
  CHECK(b.back() == 1.0);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i] > b[i - 1]);
  const auto l = graded_toward_left(0.0, 2.0, 0.5, 3);
  CHECK(l[1] == doctest::Approx(0.25));
  CHECK(integrate_breaks([](double x) { return std::exp(x); }, std::span<const double>(l), 8) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
}
