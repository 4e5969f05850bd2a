#include <doctest.h>

#include <cmath>

#include <nlgrad/error.hpp>
#include <nlgrad/operators.hpp>
#include <nlgrad/solvers.hpp>
#include <nlgrad/symbols.hpp>

#include "support.hpp"

using namespace nlgrad;

namespace {

const SymbolTable& table2() {
  static const SymbolTable t = build_table(test::constant(2, 0.2), Orientation::angle(0.4), 5);
  return t;
}

const SymbolTable& table3() {
  static const SymbolTable t = build_table(test::constant(3, 0.2), Orientation::normalized(test::vec({1, 2, 3})), 4);
  return t;
}

/// A field with a single mode pair xi0, -xi0 (realness kept by set()).
SpectralField single(int dim, int bound, int components, const Mode& m, const CVecX& value) {
  SpectralField f(dim, bound, components);
  f.set(m, value);
  return f;
}

}  // namespace

TEST_CASE("Stokes: gradient forcing is pure pressure") {
  const SymbolTable& t = table2();
  const Mode m = test::mode2(2, -1);
  const CVecX l = t.at(m);
  const StokesSolution s = stokes_steady(t, single(2, 5, 2, m, l));
  CHECK(test::max_abs(s.velocity) <= 1e-15);
  CHECK(std::abs(s.pressure.at(m)(0) - 1.0) <= 1e-14);
}

TEST_CASE("Stokes: forcing orthogonal to conj(lambda) is pure velocity") {
  const SymbolTable& t = table2();
  const Mode m = test::mode2(1, 3);
  const CVec& l = t.at(m);
  CVecX f(2);
  f << std::conj(l(1)), -std::conj(l(0));
  const StokesSolution s = stokes_steady(t, single(2, 5, 2, m, f));
  CHECK(test::max_abs(s.pressure) <= 1e-15);
  const CVecX expected = f / l.squaredNorm();
  CHECK((s.velocity.at(m) - expected).norm() <= 1e-15 * expected.norm());
}

TEST_CASE("Stokes: residual, divergence and Leray projection") {
  const SymbolTable& t = table2();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField f = random_field(seed, 2, 5, 2, 1.0);
    const StokesSolution s = stokes_steady(t, f);
    CHECK(stokes_residual(t, s, f) <= 1e-12);
    // Independent assembly: -L u + G p - f per mode.
    const SpectralField r = (-1.0 * diffusion(t, s.velocity)) + gradient(t, s.pressure) - f;
    CHECK(test::max_abs(r) <= 1e-12 * test::max_abs(f));
    CHECK(test::max_abs(divergence(t, s.velocity)) <= 1e-13 * test::max_abs(s.velocity));
    CHECK(stokes_stability_ratio(t, s, f) <= 2.0);
    const SpectralField p = leray_project(t, f);
    CHECK(test::max_diff(leray_project(t, p), p) <= 1e-14);
    CHECK(test::max_abs(divergence(t, p)) <= 1e-13);
  }
  // P lambda = 0 on a gradient field.
  const SpectralField g = gradient(t, random_field(9, 2, 5, 1, 1.0));
  CHECK(test::max_abs(leray_project(t, g)) <= 1e-15);
}

TEST_CASE("Stokes convergence: gradient forcing along n has no velocity error") {
  // With n parallel to xi0 the nonlocal symbol is parallel to i xi0, so a
  // local gradient forcing is a nonlocal gradient too.
  const KernelSpec k = test::constant(2);
  const Mode m = test::mode2(1, 0);
  CVecX v(2);
  v << cplx(0.0, 1.0), 0.0;
  const SpectralField f = single(2, 2, 2, m, v);
  const ResultTable r = stokes_convergence(k, Orientation::axis(2, 0), f, {0.2, 0.1, 0.05});
  for (double e : r.column("err_u")) CHECK(e <= 1e-15);
  for (double e : r.column("err_div")) CHECK(e <= 1e-15);
}

TEST_CASE("Stokes convergence is first order on smooth data") {
  const SpectralField f = random_field(20240601, 2, 6, 2, 3.0);
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  const ResultTable r = stokes_convergence(test::constant(2), Orientation::angle(0.3), f, deltas);
  for (const char* c : {"err_u", "err_p", "err_div"}) {
    const double slope = fit_slope(deltas, r.column(c));
    CHECK(slope >= 0.9);
    CHECK(slope <= 1.5);
  }
}

TEST_CASE("unsteady Stokes decays and rejects divergent initial data") {
  const SymbolTable& t = table2();
  const SpectralField u0 = leray_project(t, random_field(1, 2, 5, 2, 1.0));
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(0.1 * k);
  const Trajectory tr = stokes_evolve(t, u0, {}, times);
  REQUIRE(tr.states.size() == times.size());
  for (std::size_t k = 1; k < times.size(); ++k) CHECK(norms(tr.states[k]).l2 < norms(tr.states[k - 1]).l2);
  // Per-mode exponential decay.
  const Mode m = test::mode2(2, 1);
  const double a = t.at(m).squaredNorm();
  CHECK((tr.states.back().at(m) - std::exp(-a * 1.0) * u0.at(m)).norm() <= 1e-14);
  CHECK_THROWS_AS(stokes_evolve(t, random_field(1, 2, 5, 2, 1.0), {}, times), IncompatibleData);
}

TEST_CASE("Helmholtz decompositions") {
  const SymbolTable& t2 = table2();
  const SpectralField u = random_field(2, 2, 5, 2, 1.0);
  const Helmholtz2D h = helmholtz2d(t2, u);
  CHECK(test::max_diff(helmholtz2d_reconstruct(t2, h), u) <= 1e-14);
  const Helmholtz2D g = helmholtz2d(t2, gradient(t2, h.p));
  CHECK(test::max_abs(g.q) <= 1e-15);
  CHECK(test::max_diff(g.p, h.p) <= 1e-14);

  const SymbolTable& t3 = table3();
  const SpectralField w = random_field(3, 3, 4, 3, 1.0);
  const Helmholtz3D h3 = helmholtz3d(t3, w);
  CHECK(test::max_diff(helmholtz3d_reconstruct(t3, h3), w) <= 1e-14);
  CHECK(test::max_abs(divergence(t3.reflected(), h3.v)) <= 1e-14);
}

TEST_CASE("div-curl system") {
  const SymbolTable& t = table3();
  const SpectralField p = random_field(4, 3, 4, 1, 1.0);
  const DivCurlSolution s = divcurl3d(t, diffusion(t, p), SpectralField::vector(3, 4));
  CHECK(test::max_diff(s.u, gradient(t, p)) <= 1e-13);
  CHECK(test::max_abs(divcurl3d(t, SpectralField::scalar(3, 4), SpectralField::vector(3, 4)).u) == 0.0);

  const SpectralField v = random_field(5, 3, 4, 3, 1.0);
  const SpectralField f = random_field(6, 3, 4, 1, 1.0);
  const DivCurlSolution c = divcurl3d(t, f, curl3d(t, v, +1));
  CHECK(c.residual <= 1e-12);
  CHECK(test::max_diff(divergence(t, c.u), f) <= 1e-13);
  CHECK_THROWS_AS(divcurl3d(t, f, v), IncompatibleData);
  CHECK(friedrichs_ratio(t, v) > 0.0);
}

TEST_CASE("Navier: energy, Korn and steady solve") {
  const SymbolTable& t = table3();
  for (const Lame lame : {Lame{1.0, 0.0}, Lame{2.0, -1.0}}) {
    const NavierModeDecomposition dec = navier_decompose(t, lame);
    const double korn = std::min(lame.mu, lame.lambda + 2.0 * lame.mu);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const SpectralField u = random_field(seed, 3, 4, 3, 1.0);
      CHECK(navier_energy(dec, u) == doctest::Approx(elastic_energy(u, t, lame)).epsilon(1e-13));
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double g = t[i].squaredNorm() * u.coeffs(i).squaredNorm();
        if (g == 0.0) continue;
        const double e = (u.coeffs(i).adjoint() * dec.matrix(i) * u.coeffs(i))(0).real();
        CHECK(e >= korn * g * (1.0 - 1e-12));
      }
      const SpectralField f = random_field(seed + 10, 3, 4, 3, 1.0);
      CHECK(navier_residual(dec, navier_steady(dec, f), f) <= 1e-12);
    }
  }
  // With lambda_L = 0 the shear mode attains the constant mu exactly.
  const NavierModeDecomposition dec = navier_decompose(t, Lame{1.5, 0.0});
  const Mode m = test::mode3(1, 0, 2);
  const std::size_t i = t.lattice().index(m);
  const CVec& l = t[i];
  CVecX shear = cross(l.conjugate(), test::vec({0.3, -1.0, 0.7}).cast<cplx>());
  const double e = (shear.adjoint() * dec.matrix(i) * shear)(0).real();
  CHECK(e == doctest::Approx(1.5 * l.squaredNorm() * shear.squaredNorm()).epsilon(1e-12));
  CHECK_THROWS_AS(navier_decompose(t, Lame{-1.0, 1.0}), InvalidArgument);
}

TEST_CASE("Navier evolution conserves the Hamiltonian and does not commute with the local operator") {
  const SymbolTable& t = table2();
  const NavierModeDecomposition dec = navier_decompose(t, Lame{1.0, 1.0});
  const SpectralField g = random_field(1, 2, 5, 2, 2.0), h = random_field(2, 2, 5, 2, 2.0);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.05 * k);
  const Trajectory tr = navier_evolve(dec, g, h, {}, times);
  CHECK(navier_hamiltonian_drift(dec, tr) <= 1e-10);
  CHECK(test::max_diff(tr.states.front(), g) == 0.0);
  const double h0 = navier_hamiltonian(dec, g, h);
  CHECK(navier_hamiltonian(dec, tr.states.back(), tr.velocities.back()) == doctest::Approx(h0).epsilon(1e-12));
  const NavierModeDecomposition local = navier_decompose(SymbolTable::local(2, 5), Lame{1.0, 1.0});
  CHECK(navier_commutator(dec, local) > 1e-8);
  CHECK(navier_commutator(local, local) <= 1e-14);
}

TEST_CASE("Navier steady convergence in the V norm") {
  const SpectralField f = random_field(20240601, 2, 6, 2, 3.0);
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  const ResultTable r = navier_convergence(test::constant(2), Orientation::angle(0.3), f, deltas, Lame{1.0, 1.0});
  CHECK(fit_slope(deltas, r.column("err_v")) >= 0.9);
}
