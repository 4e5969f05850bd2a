#include <doctest.h>

#include <cmath>

#include <nlgrad/operators.hpp>
#include <nlgrad/results.hpp>
#include <nlgrad/symbols.hpp>

#include "support.hpp"

using namespace nlgrad;

namespace {

const SymbolTable& table2() {
  static const SymbolTable t = build_table(test::constant(2, 0.2), Orientation::angle(0.7), 6);
  return t;
}

const SymbolTable& table3() {
  static const SymbolTable t =
      build_table(test::fractional(1.5, 3, 0.25), Orientation::normalized(test::vec({1.0, -1.0, 2.0})), 4);
  return t;
}

}  // namespace

TEST_CASE("gradient and divergence are negative adjoints") {
  for (const SymbolTable* t : {&table2(), &table3()}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const SpectralField v = random_field(100 + s, t->dim(), t->bound(), 1, 1.0);
      const SpectralField u = random_field(200 + s, t->dim(), t->bound(), t->dim(), 1.0);
      const SpectralField gv = gradient(*t, v);
      const cplx lhs = inner(gv, u), rhs = -inner(v, divergence(*t, u));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * norms(gv).l2 * norms(u).l2);
    }
  }
}

TEST_CASE("diffusion is divergence of gradient and ignores the sign of n") {
  const SymbolTable& t = table2();
  const SpectralField u = random_field(3, 2, 6, 1, 1.0);
  CHECK(test::max_diff(diffusion(t, u), divergence(t, gradient(t, u))) <= 1e-13);
  const SymbolTable opposite = build_table(test::constant(2, 0.2), -Orientation::angle(0.7), 6);
  CHECK(test::max_diff(diffusion(t, u), diffusion(opposite, u)) <= 1e-10 * test::max_abs(diffusion(t, u)));
  // Vector fields diffuse componentwise.
  const SpectralField w = random_field(4, 2, 6, 2, 1.0);
  const SpectralField lw = diffusion(t, w);
  CHECK(test::max_diff(lw.component(1), diffusion(t, w.component(1))) <= 1e-14);
}

TEST_CASE("diffusion is coercive with the lattice minimum") {
  const SymbolTable& t = table2();
  const double c = std::pow(verify_bounds(t).min_abs, 2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SpectralField u = random_field(s, 2, 6, 1, 0.0);
    const double form = -inner(diffusion(t, u), u).real();
    CHECK(form >= c * std::pow(norms(u).l2, 2) * (1.0 - 1e-12));
  }
}

TEST_CASE("curl identities in three dimensions") {
  const SymbolTable& t = table3();
  for (std::uint64_t s = 0; s < 4; ++s) {
    const SpectralField p = random_field(s, 3, 4, 1, 1.0);
    const SpectralField f = random_field(50 + s, 3, 4, 3, 1.0);
    const SpectralField gp = gradient(t, p);
    CHECK(test::max_abs(curl3d(t, gp, +1)) <= 1e-14 * test::max_abs(gp));
    const SpectralField lhs = curl3d(t, curl3d(t, f, +1), -1);
    const SpectralField rhs = gradient(t, divergence(t, f)) - diffusion(t, f);
    CHECK(test::max_diff(lhs, rhs) <= 1e-13 * test::max_abs(rhs));
  }
  CHECK(test::max_abs(curl3d(t, SpectralField::vector(3, 4), +1)) == 0.0);
}

TEST_CASE("strain: symmetry, dense construction and trace") {
  const SymbolTable& t = table3();
  const SpectralField u = random_field(8, 3, 4, 3, 1.0);
  const SpectralField e = strain(t, u);
  REQUIRE(e.components() == 9);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const CVec& l = t[i];
    const CVecX uh = u.coeffs(i);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const cplx dense = 0.5 * (l(a) * uh(b) + l(b) * uh(a));
        CHECK(std::abs(e.coeffs(i)(3 * a + b) - dense) <= 1e-15);
        CHECK(e.coeffs(i)(3 * a + b) == e.coeffs(i)(3 * b + a));
      }
    }
  }
  // Tr e^{-n}(u) = D^n u.
  const SpectralField er = strain(t.reflected(), u);
  const SpectralField du = divergence(t, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx tr = er.coeffs(i)(0) + er.coeffs(i)(4) + er.coeffs(i)(8);
    CHECK(std::abs(tr - du.coeffs(i)(0)) <= 1e-14);
  }
}

TEST_CASE("gradient converges to the local gradient at first order") {
  SpectralField u = SpectralField::scalar(2, 2);
  u.set(test::mode2(1, 0), CVecX::Constant(1, cplx(0.0, -0.5)));  // sin(x1)
  const SpectralField local = gradient(SymbolTable::local(2, 2), u);
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.025}, errs;
  for (double d : deltas) {
    const SymbolTable t = build_table(test::constant(2, d), Orientation::angle(0.3), 2);
    errs.push_back(norms(gradient(t, u) - local).l2);
  }
  CHECK(fit_slope(deltas, errs) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(test::max_abs(gradient(table2(), SpectralField::scalar(2, 6))) == 0.0);
}

TEST_CASE("spectral gradient matches the physical-space quadrature oracle") {
  const KernelSpec k = test::constant(2, 0.5);
  const Orientation n = Orientation::angle(0.7);
  const PointFunction f = [](const RVec& x) { return CVecX::Constant(1, std::sin(x(0) + 2.0 * x(1))); };
  const SpectralField u = forward_transform(sample(2, 8, 1, f), 2).field;
  const SpectralField g = gradient(build_table(k, n, 2), u);
  for (const RVec& x : {test::vec({0.1, -0.4}), test::vec({2.0, 1.3})}) {
    const Eigen::MatrixXcd direct = gradient_oracle(k, n, f, x);
    const CVecX spectral = evaluate(g, x);
    for (int c = 0; c < 2; ++c) CHECK(std::abs(direct(c, 0) - spectral(c)) <= 1e-8);
  }
  const PointFunction v = [](const RVec& x) {
    CVecX r(2);
    r << std::sin(x(0) + x(1)), std::cos(2.0 * x(0));
    return r;
  };
  const SpectralField vh = forward_transform(sample(2, 8, 2, v), 2).field;
  const SpectralField dv = divergence(build_table(k, n, 2), vh);
  const RVec x = test::vec({-1.0, 0.25});
  CHECK(std::abs(divergence_oracle(k, n, v, x) - evaluate(dv, x)(0)) <= 1e-8);
}

TEST_CASE("doubly nonlocal factorization and averaging") {
  const KernelSpec gamma = KernelSpec::normalize(KernelProfile::constant(), 1, 0.2, Normalization::SecondMoment);
  const KernelSpec eta = KernelSpec::normalize(KernelProfile::constant(), 1, 0.05, Normalization::UnitMass);
  CHECK(averaging_symbol(eta, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Constant unit-mass eta on (-eps, eps): a(xi) = 1/2 + sin(xi eps)/(2 xi eps).
  for (double xi : {0.5, 7.0, 40.0}) {
    CHECK(averaging_symbol(eta, xi) == doctest::Approx(0.5 + std::sin(xi * 0.05) / (2.0 * xi * 0.05)).epsilon(1e-13));
    const double prod = bond_symbol(gamma, xi) * averaging_symbol(eta, xi);
    CHECK(std::abs(double_laplacian_symbol(gamma, eta, xi) - prod) <= 1e-12 * std::abs(prod));
    // 4 c delta^-3 int_0^delta (cos(xi a) - 1) da with c = 3/2.
    const double bond = 4.0 * 1.5 / 0.008 * (std::sin(xi * 0.2) / xi - 0.2);
    CHECK(bond_symbol(gamma, xi) == doctest::Approx(bond).epsilon(1e-12));
  }
  SpectralField u = SpectralField::scalar(1, 4);
  u.set(Mode{{3, 0, 0}, 1}, CVecX::Constant(1, cplx(0.2, 0.1)));
  const SpectralField lu = double_laplacian_1d(gamma, eta, u);
  const double factor = bond_symbol(gamma, 3.0) * averaging_symbol(eta, 3.0);
  CHECK(std::abs(lu.at(Mode{{3, 0, 0}, 1})(0) - factor * cplx(0.2, 0.1)) <= 1e-12);
  CHECK(std::abs(averaging_1d(eta, u).at(Mode{{3, 0, 0}, 1})(0) - averaging_symbol(eta, 3.0) * cplx(0.2, 0.1)) <=
        1e-14);
}

TEST_CASE("star gradient with k = 0 is the radially symmetric gradient") {
  const KernelSpec k = test::constant(2, 0.2);
  const SymbolTable star = build_star_table(k, RVec::Zero(2), 5);
  const SymbolTable half = build_table(k, Orientation::angle(1.1), 5);
  const SpectralField u = random_field(12, 2, 5, 1, 1.0);
  const SpectralField a = star_gradient(star, u);
  SpectralField b = gradient(half, u);
  // Keep only i Im lambda of the half-space symbol.
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int c = 0; c < 2; ++c) b.coeffs(i)(c) = cplx(0.0, half[i](c).imag()) * u.coeffs(i)(0);
  CHECK(test::max_diff(a, b) <= 1e-10 * test::max_abs(b));
}

TEST_CASE("cross product") {
  CVec a(3), b(3);
  a << cplx(1, 1), 2.0, 0.0;
  b << 0.0, cplx(0, 1), 3.0;
  const CVec c = cross(a, b);
  CHECK(std::abs(c(0) - 6.0) <= 1e-15);
  CHECK(std::abs(c(1) - cplx(-3, -3)) <= 1e-15);
  CHECK(std::abs(c(2) - cplx(-1, 1)) <= 1e-15);
}
