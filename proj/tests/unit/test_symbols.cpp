#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include <nlgrad/error.hpp>
#include <nlgrad/results.hpp>
#include <nlgrad/symbols.hpp>

#include "support.hpp"

using namespace nlgrad;
using std::numbers::pi;

namespace {

// In two dimensions Im lambda(xi) = Lambda(|xi|) xi/|xi| with
//   Lambda(k) = 2 pi int_0^delta w(r) r J1(k r) dr,
// which follows from integrating s/|s| sin(xi.s) over the full disk.
double bessel_lambda_constant(double k, double delta) {
  const double w = (3.0 / pi) / std::pow(delta, 3);
  return 2.0 * pi * w * test::simpson([&](double r) { return r * std::cyl_bessel_j(1.0, k * r); }, 0.0, delta);
}

// Fractional beta = 1.5, delta = 1, substituting r = t^2 to remove the
// square-root behaviour at the origin: 2 pi c int_0^1 2 J1(k t^2) dt.
double bessel_lambda_fractional15(double k) {
  const double c = 1.5 / pi;
  return 2.0 * pi * c * test::simpson([&](double t) { return 2.0 * std::cyl_bessel_j(1.0, k * t * t); }, 0.0, 1.0);
}

const SymbolTable& constant_table() {
  static const SymbolTable t = build_table(test::constant(2, 0.2), Orientation::angle(0.3), 6);
  return t;
}

}  // namespace

TEST_CASE("radial symbol matches the Bessel oracle") {
  for (double k : {0.5, 3.0, 17.3, 60.0}) {
    CHECK(lambda_radial(test::constant(2), k) == doctest::Approx(bessel_lambda_constant(k, 1.0)).epsilon(1e-9));
    CHECK(lambda_radial(test::constant(2, 0.1), k) == doctest::Approx(bessel_lambda_constant(k, 0.1)).epsilon(1e-9));
    CHECK(lambda_radial(test::fractional(1.5, 2), k) == doctest::Approx(bessel_lambda_fractional15(k)).epsilon(1e-9));
  }
  CHECK(lambda_radial(test::constant(2), 0.0) == 0.0);
}

TEST_CASE("table imaginary parts follow the Bessel oracle") {
  const SymbolTable& t = constant_table();
  for (std::size_t i = 0; i < t.lattice().size(); ++i) {
    const Mode m = t.lattice().mode(i);
    if (m.is_zero()) continue;
    const RVec xi = m.to_real();
    const RVec expected = bessel_lambda_constant(xi.norm(), 0.2) * xi / xi.norm();
    CHECK((t[i].imag() - expected).norm() <= 1e-9 * expected.norm());
  }
}

TEST_CASE("Constant kernel, delta = 0.1, |xi| = 1 lies in [0.9, 1.0]") {
  const double v = lambda_radial(test::constant(2, 0.1), 1.0);
  CHECK(v >= 0.9);
  CHECK(v <= 1.0);
  CHECK(v == doctest::Approx(bessel_lambda_constant(1.0, 0.1)).epsilon(1e-10));
}

TEST_CASE("conjugate symmetry, bounds and the zero mode") {
  for (const SymbolTable& t : {constant_table(), build_table(test::fractional(1.0, 3, 0.3),
                                                             Orientation::normalized(test::vec({1, 2, 3})), 3)}) {
    const double upper = std::sqrt(2.0) * t.dim();
    for (std::size_t i = 0; i < t.lattice().size(); ++i) {
      const Mode m = t.lattice().mode(i);
      const CVec& l = t[i];
      CHECK((t[t.lattice().negated(i)] - l.conjugate()).norm() <= 1e-15 * (1.0 + l.norm()));
      if (m.is_zero()) {
        CHECK(l.norm() == 0.0);
        continue;
      }
      CHECK(l.norm() > 0.0);
      CHECK(l.norm() <= upper * std::sqrt(double(m.norm2())) + 1e-8);
    }
    const BoundsReport r = verify_bounds(t);
    CHECK(r.holds());
    CHECK(r.upper_bound == doctest::Approx(upper));
  }
}

TEST_CASE("reflection relation lambda^{-n} = -conj(lambda^n)") {
  const SymbolTable& t = constant_table();
  const SymbolTable opposite = build_table(test::constant(2, 0.2), -Orientation::angle(0.3), 6);
  const SymbolTable reflected = t.reflected();
  for (std::size_t i = 0; i < t.lattice().size(); ++i) {
    CHECK((reflected[i] + t[i].conjugate()).norm() == 0.0);
    CHECK((opposite[i] - reflected[i]).norm() <= 1e-10 * (1.0 + t[i].norm()));
  }
}

TEST_CASE("direct symbol evaluation agrees with the table") {
  const SymbolTable& t = constant_table();
  for (const Mode& m : {test::mode2(1, 0), test::mode2(-3, 5), test::mode2(6, 6)}) {
    const CVec direct = symbol(test::constant(2, 0.2), Orientation::angle(0.3), m.to_real());
    CHECK((direct - t.at(m)).norm() <= 1e-9 * direct.norm());
  }
}

TEST_CASE("real part is parallel to xi when n is") {
  const KernelSpec k = test::constant(2, 0.3);
  const CVec l = symbol(k, Orientation::axis(2, 0), test::vec({3.0, 0.0}));
  CHECK(std::abs(l(1)) <= 1e-12);
  CHECK(l(0).real() < 0.0);
  const CVec skew = symbol(k, Orientation::angle(0.5), test::vec({3.0, 0.0}));
  CHECK(std::abs(skew(1).real()) > 1e-3);
}

TEST_CASE("Lambda does not depend on the orientation") {
  const KernelSpec k = test::fractional(1.5, 2, 0.2);
  const SymbolTable a = build_table(k, Orientation::axis(2, 0), 5);
  const SymbolTable b = build_table(k, Orientation::normalized(test::vec({1.0, 1.0})), 5);
  for (std::size_t i = 0; i < a.lattice().size(); ++i) CHECK((a[i].imag() - b[i].imag()).norm() <= 1e-10);
  for (const auto& [n2, v] : a.lambda_radial_table()) CHECK(b.lambda_radial(n2) == doctest::Approx(v).epsilon(1e-10));
}

TEST_CASE("local consistency as delta shrinks") {
  const RVec xi = test::vec({1.0, 0.0});
  std::vector<double> deltas{1e-1, 1e-2, 1e-3}, errs;
  for (double d : deltas) {
    const CVec l = symbol(test::constant(2, d), Orientation::angle(0.4), xi);
    CVec local(2);
    local << cplx(0.0, 1.0), cplx(0.0, 0.0);
    errs.push_back((l - local).norm());
  }
  CHECK(errs.back() <= 2e-3);
  CHECK(fit_slope(deltas, errs) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("star symbol") {
  const KernelSpec k = test::constant(2, 0.2);
  const RVec zero = RVec::Zero(2);
  const RVec xi = test::vec({2.0, -1.0});
  const CVec s0 = star_symbol(k, zero, xi);
  CHECK(s0.real().norm() == 0.0);
  CHECK(s0.imag().norm() == doctest::Approx(lambda_radial(k, xi.norm())).epsilon(1e-10));

  const Lattice lat(2, 5);
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (!lat.mode(i).is_zero()) CHECK(m_delta(k, lat.mode(i).to_real()) < 0.0);

  std::vector<double> deltas{0.1, 0.05, 0.025}, ms;
  for (double d : deltas) ms.push_back(std::abs(m_delta(test::constant(2, d), xi)));
  CHECK(fit_slope(deltas, ms) == doctest::Approx(1.0).epsilon(0.05));

  const SymbolTable st = build_star_table(k, test::vec({0.3, 0.4}), 4);
  CHECK(st.kind() == SymbolKind::Star);
  const Mode m = test::mode2(2, -1);
  const CVec direct = star_symbol(k, test::vec({0.3, 0.4}), m.to_real());
  CHECK((st.at(m) - direct).norm() <= 1e-10 * direct.norm());
}

TEST_CASE("orientation-averaged energy density") {
  const KernelSpec k = test::constant(2, 0.3);
  const double a = averaged_energy_density(k, test::vec({3.0, 4.0}), 16);
  const double b = averaged_energy_density(k, test::vec({5.0, 0.0}), 16);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  const double big = lambda_radial(k, 5.0);
  CHECK(a >= big * big);
}

TEST_CASE("lattice minimum is stable in delta") {
  const KernelSpec k = test::constant(2);
  const double a = verify_bounds(build_table(k.with_horizon(0.1), Orientation::angle(0.2), 8)).min_abs;
  const double b = verify_bounds(build_table(k.with_horizon(0.02), Orientation::angle(0.2), 8)).min_abs;
  CHECK(std::abs(a - b) / std::min(a, b) < 0.2);
}

TEST_CASE("local table and save/load round trip") {
  const SymbolTable local = SymbolTable::local(2, 3);
  const Mode m = test::mode2(2, -3);
  CHECK(local.at(m)(0) == cplx(0.0, 2.0));
  CHECK(local.at(m)(1) == cplx(0.0, -3.0));

  const auto path = std::filesystem::temp_directory_path() / "nlgrad_symbols_roundtrip.txt";
  constant_table().save(path);
  const SymbolTable loaded = SymbolTable::load(path);
  std::filesystem::remove(path);
  REQUIRE(loaded.lattice() == constant_table().lattice());
  for (std::size_t i = 0; i < loaded.lattice().size(); ++i) CHECK(loaded[i] == constant_table()[i]);
}

TEST_CASE("table construction is independent of the thread count") {
  SymbolOptions one, two;
  two.threads = 2;
  const KernelSpec k = test::fractional(1.2, 2, 0.25);
  const SymbolTable a = build_table(k, Orientation::angle(1.0), 5, one);
  const SymbolTable b = build_table(k, Orientation::angle(1.0), 5, two);
  for (std::size_t i = 0; i < a.lattice().size(); ++i) CHECK(a[i] == b[i]);
}
