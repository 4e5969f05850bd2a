#include "nlgrad/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "nlgrad/error.hpp"
#include "nlgrad/operators.hpp"

namespace nlgrad {
namespace {

void require_vector(const SymbolTable& table, const SpectralField& u, const char* what) {
  if (u.components() != u.dim()) throw InvalidArgument(std::string(what) + " needs a d-vector field");
  if (table.dim() != u.dim()) throw InvalidArgument(std::string(what) + ": table and field dimensions differ");
  if (table.bound() < u.bound()) throw InvalidArgument(std::string(what) + ": table does not cover the field");
}

double max_coeff(const SpectralField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f.coeffs(i).norm());
  return m;
}

// Pi = lambda lambda^H / |lambda|^2.
CMat rank_one(const CVec& lam) { return lam * lam.adjoint() / lam.squaredNorm(); }

// J = [[0, -1], [1, 0]].
CVec rotate(const CVec& v) {
  CVec out(2);
  out << -v[1], v[0];
  return out;
}

double l2(const SpectralField& f) { return norms(f).l2; }

std::vector<SymbolTable> build_tables(const KernelSpec& kernel, const Orientation& n, int bound,
                                      const std::vector<double>& deltas, const SymbolOptions& options) {
  std::vector<SymbolTable> tables;
  tables.reserve(deltas.size());
  for (double d : deltas) tables.push_back(build_table(kernel.with_horizon(d), n, bound, options));
  return tables;
}

void require_times(const std::vector<double>& times) {
  if (times.size() < 2 || times.front() != 0.0) throw InvalidArgument("time grid must start at 0 with >= 2 points");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw InvalidArgument("time grid must be strictly increasing");
}

SpectralField forcing_at(const Forcing& f, double t, const SpectralField& like) {
  if (!f) return SpectralField(like.dim(), like.bound(), like.components(), like.is_real());
  SpectralField v = f(t);
  if (!(v.lattice() == like.lattice()) || v.components() != like.components())
    throw InvalidArgument("forcing has the wrong truncation or component count");
  return v;
}

}  // namespace

// ---------------------------------------------------------------- Stokes

StokesSolution stokes_steady(const SymbolTable& table, const SpectralField& f) {
  require_vector(table, f, "stokes_steady");
  StokesSolution sol{SpectralField(f.dim(), f.bound(), f.dim(), f.is_real()),
                     SpectralField(f.dim(), f.bound(), 1, f.is_real())};
  const Lattice& lat = f.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    const double a = lam.squaredNorm();
    const CVec fh = f.coeffs(i);
    const cplx p = lam.dot(fh) / a;
    sol.velocity.coeffs(i) = (fh - lam * p) / a;
    sol.pressure.coeffs(i)[0] = p;
  }
  return sol;
}

double stokes_residual(const SymbolTable& table, const StokesSolution& sol, const SpectralField& f) {
  const SpectralField lu = diffusion(table, sol.velocity);
  const SpectralField gp = gradient(table, sol.pressure);
  const SpectralField div = divergence(table, sol.velocity);
  const double scale = std::max(max_coeff(f), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, (gp.coeffs(i) - lu.coeffs(i) - f.coeffs(i)).norm() / scale);
    worst = std::max(worst, std::abs(div.coeffs(i)[0]) / scale);
  }
  return worst;
}

double stokes_stability_ratio(const SymbolTable& table, const StokesSolution& sol, const SpectralField& f) {
  double dual = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Mode m = f.lattice().mode(i);
    if (m.is_zero()) continue;
    dual += f.coeffs(i).squaredNorm() / table.at(m).squaredNorm();
  }
  const double s = *norms(sol.velocity, &table).energy;
  return (s + l2(sol.pressure)) / std::sqrt(dual);
}

ResultTable stokes_convergence(const std::vector<SymbolTable>& tables, const std::vector<double>& deltas,
                               const SpectralField& f) {
  if (tables.size() != deltas.size()) throw InvalidArgument("one symbol table per delta required");
  const SymbolTable local = SymbolTable::local(f.dim(), f.bound());
  const StokesSolution ref = stokes_steady(local, f);
  ResultTable out({"delta", "err_u", "err_p", "err_div"});
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const StokesSolution s = stokes_steady(tables[k], f);
    out.add_row({deltas[k], l2(s.velocity - ref.velocity), l2(s.pressure - ref.pressure),
                 l2(divergence(local, s.velocity))});
  }
  return out;
}

ResultTable stokes_convergence(const KernelSpec& kernel, const Orientation& n, const SpectralField& f,
                               const std::vector<double>& deltas, const SymbolOptions& options) {
  return stokes_convergence(build_tables(kernel, n, f.bound(), deltas, options), deltas, f);
}

SpectralField leray_project(const SymbolTable& table, const SpectralField& u) {
  require_vector(table, u, "leray_project");
  SpectralField out = u;
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    const CVec uh = u.coeffs(i);
    out.coeffs(i) = uh - lam * (lam.dot(uh) / lam.squaredNorm());
  }
  return out;
}

Trajectory stokes_evolve(const SymbolTable& table, const SpectralField& u0, const Forcing& f,
                         const std::vector<double>& times) {
  require_vector(table, u0, "stokes_evolve");
  require_times(times);
  const Lattice& lat = u0.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    const CVec uh = u0.coeffs(i);
    if (std::abs(lam.dot(uh)) > 1e-10 * std::max(lam.norm() * uh.norm(), 1e-300))
      throw IncompatibleData("initial velocity is not nonlocally divergence free");
  }
  Trajectory traj;
  SpectralField u = u0;
  auto record = [&](double t, const SpectralField& fk) {
    traj.times.push_back(t);
    traj.states.push_back(u);
    if (f) {
      SpectralField p(u.dim(), u.bound(), 1, fk.is_real());
      for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == lat.zero_index()) continue;
        const CVec& lam = table.at(lat.mode(i));
        p.coeffs(i)[0] = lam.dot(CVec(fk.coeffs(i))) / lam.squaredNorm();
      }
      traj.pressures.push_back(std::move(p));
    }
  };
  SpectralField fk = forcing_at(f, times[0], u0);
  record(times[0], fk);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double h = times[k] - times[k - 1];
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (i == lat.zero_index()) continue;
      const CVec& lam = table.at(lat.mode(i));
      const double a = lam.squaredNorm();
      const CVec fh = fk.coeffs(i);
      const CVec pf = fh - lam * (lam.dot(fh) / a);
      u.coeffs(i) = std::exp(-a * h) * u.coeffs(i) + (-std::expm1(-a * h) / a) * pf;
    }
    u.set_real(u.is_real() && fk.is_real());
    fk = forcing_at(f, times[k], u0);
    record(times[k], fk);
  }
  return traj;
}

double trajectory_l2_error(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times) throw InvalidArgument("trajectories live on different time grids");
  double total = 0.0;
  double prev = l2(a.states[0] - b.states[0]);
  for (std::size_t k = 1; k < a.times.size(); ++k) {
    const double cur = l2(a.states[k] - b.states[k]);
    total += 0.5 * (a.times[k] - a.times[k - 1]) * (prev * prev + cur * cur);
    prev = cur;
  }
  return std::sqrt(total);
}

ResultTable trajectory_table(const Trajectory& traj, const SymbolTable& table, const Trajectory* reference,
                             const std::optional<Lame>& lame) {
  std::vector<std::string> cols{"t", "l2", "energy"};
  if (reference) {
    if (reference->times != traj.times) throw InvalidArgument("reference trajectory uses a different time grid");
    cols.push_back("error");
  }
  ResultTable out(cols);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const SpectralField& u = traj.states[k];
    const FieldNorms nm = norms(u, &table);
    double energy = 0.0;
    if (lame) {
      energy = elastic_energy(u, table, *lame);
      if (!traj.velocities.empty()) energy += 0.5 * std::pow(l2(traj.velocities[k]), 2);
    } else {
      energy = *nm.energy * *nm.energy;
    }
    std::vector<double> row{traj.times[k], nm.l2, energy};
    if (reference) row.push_back(l2(u - reference->states[k]));
    out.add_row(std::move(row));
  }
  return out;
}

// ------------------------------------------------------------- Helmholtz

Helmholtz2D helmholtz2d(const SymbolTable& table, const SpectralField& u) {
  if (u.dim() != 2) throw InvalidArgument("helmholtz2d needs a two-dimensional field");
  require_vector(table, u, "helmholtz2d");
  Helmholtz2D out{SpectralField(2, u.bound(), 1, u.is_real()), SpectralField(2, u.bound(), 1, u.is_real())};
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    const double a = lam.squaredNorm();
    const CVec uh = u.coeffs(i);
    out.p.coeffs(i)[0] = lam.dot(uh) / a;
    out.q.coeffs(i)[0] = (lam.transpose() * rotate(uh))(0) / a;
  }
  return out;
}

SpectralField helmholtz2d_reconstruct(const SymbolTable& table, const Helmholtz2D& parts) {
  const SpectralField gp = gradient(table, parts.p);
  SpectralField jgq = gradient(table.reflected(), parts.q);
  for (std::size_t i = 0; i < jgq.size(); ++i) jgq.coeffs(i) = rotate(CVec(jgq.coeffs(i)));
  return gp + jgq;
}

Helmholtz3D helmholtz3d(const SymbolTable& table, const SpectralField& u) {
  if (u.dim() != 3) throw InvalidArgument("helmholtz3d needs a three-dimensional field");
  require_vector(table, u, "helmholtz3d");
  Helmholtz3D out{SpectralField(3, u.bound(), 1, u.is_real()), SpectralField(3, u.bound(), 3, u.is_real())};
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    const double a = lam.squaredNorm();
    const CVec uh = u.coeffs(i);
    out.p.coeffs(i)[0] = lam.dot(uh) / a;
    out.v.coeffs(i) = cross(lam, uh) / a;
  }
  return out;
}

SpectralField helmholtz3d_reconstruct(const SymbolTable& table, const Helmholtz3D& parts) {
  return gradient(table, parts.p) + curl3d(table, parts.v, -1);
}

// --------------------------------------------------------------- div-curl

DivCurlSolution divcurl3d(const SymbolTable& table, const SpectralField& f, const SpectralField& g, double tolerance) {
  if (f.dim() != 3 || f.components() != 1) throw InvalidArgument("divcurl3d needs a scalar f in three dimensions");
  require_vector(table, g, "divcurl3d");
  if (!(f.lattice() == g.lattice())) throw InvalidArgument("f and g have different truncations");
  DivCurlSolution sol{SpectralField(3, g.bound(), 3, f.is_real() && g.is_real()), 0.0};
  const Lattice& lat = g.lattice();
  const double scale = std::max({max_coeff(f), max_coeff(g), 1e-300});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table.at(lat.mode(i));
    // Rows: divergence -lambda^H, then the cross-product matrix [lambda]_x.
    Eigen::Matrix<cplx, 4, 3> A;
    A.row(0) = -lam.adjoint();
    A.row(1) << 0.0, -lam[2], lam[1];
    A.row(2) << lam[2], 0.0, -lam[0];
    A.row(3) << -lam[1], lam[0], 0.0;
    Eigen::Matrix<cplx, 4, 1> b;
    b << f.coeffs(i)[0], g.coeffs(i)[0], g.coeffs(i)[1], g.coeffs(i)[2];
    const Eigen::Matrix3cd normal = A.adjoint() * A;
    const Eigen::Vector3cd uh = normal.llt().solve(A.adjoint() * b);
    sol.u.coeffs(i) = uh;
    sol.residual = std::max(sol.residual, (A * uh - b).norm() / scale);
  }
  if (sol.residual > tolerance)
    throw IncompatibleData("div-curl data violates the compatibility condition (residual " +
                           format_number(sol.residual) + ")");
  return sol;
}

double friedrichs_ratio(const SymbolTable& table, const SpectralField& u) {
  const double uu = std::pow(l2(u), 2);
  const double gu = std::pow(l2(gradient(table, u)), 2);
  const double du = std::pow(l2(divergence(table, u)), 2);
  const double cu = std::pow(l2(curl3d(table, u, 1)), 2);
  return (uu + gu) / (du + cu);
}

// ----------------------------------------------------------------- Navier

NavierModeDecomposition::NavierModeDecomposition(const SymbolTable& table, const Lame& lame)
    : table_(std::make_shared<const SymbolTable>(table)), lame_(lame) {
  if (!(lame.mu > 0.0) || !(lame.lambda + 2.0 * lame.mu > 0.0))
    throw InvalidArgument("Lame constants need mu > 0 and lambda + 2 mu > 0");
  const Lattice& lat = table.lattice();
  const int d = table.dim();
  pi_.assign(lat.size(), CMat::Zero(d, d));
  a_.assign(lat.size(), 0.0);
  b_.assign(lat.size(), 0.0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const CVec& lam = table[i];
    const double s = lam.squaredNorm();
    pi_[i] = rank_one(lam);
    a_[i] = (lame.lambda + 2.0 * lame.mu) * s;
    b_[i] = lame.mu * s;
  }
}

CMat NavierModeDecomposition::matrix(std::size_t index) const {
  return function(index, [](double x) { return x; });
}

NavierModeDecomposition navier_decompose(const SymbolTable& table, const Lame& lame) {
  return NavierModeDecomposition(table, lame);
}

SpectralField navier_steady(const NavierModeDecomposition& dec, const SpectralField& f) {
  require_vector(dec.table(), f, "navier_steady");
  SpectralField u(f.dim(), f.bound(), f.dim(), f.is_real());
  const Lattice& tl = dec.table().lattice();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Mode m = f.lattice().mode(i);
    if (m.is_zero()) continue;
    const std::size_t t = tl.index(m);
    u.coeffs(i) = dec.function(t, [](double x) { return 1.0 / x; }) * CVec(f.coeffs(i));
  }
  return u;
}

double navier_energy(const NavierModeDecomposition& dec, const SpectralField& u) {
  require_vector(dec.table(), u, "navier_energy");
  const Lattice& tl = dec.table().lattice();
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Mode m = u.lattice().mode(i);
    if (m.is_zero()) continue;
    const CVec uh = u.coeffs(i);
    total += uh.dot(dec.matrix(tl.index(m)) * uh).real();
  }
  return 0.5 * total;
}

double navier_residual(const NavierModeDecomposition& dec, const SpectralField& u, const SpectralField& f) {
  const Lattice& tl = dec.table().lattice();
  const double scale = std::max(max_coeff(f), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Mode m = u.lattice().mode(i);
    if (m.is_zero()) continue;
    worst = std::max(worst, (dec.matrix(tl.index(m)) * CVec(u.coeffs(i)) - CVec(f.coeffs(i))).norm() / scale);
  }
  return worst;
}

Trajectory navier_evolve(const NavierModeDecomposition& dec, const SpectralField& g, const SpectralField& h,
                         const Forcing& f, const std::vector<double>& times) {
  require_vector(dec.table(), g, "navier_evolve");
  require_vector(dec.table(), h, "navier_evolve");
  if (!(g.lattice() == h.lattice())) throw InvalidArgument("initial data have different truncations");
  require_times(times);
  const Lattice& lat = g.lattice();
  const Lattice& tl = dec.table().lattice();
  Trajectory traj;
  SpectralField u = g, v = h;
  traj.times.push_back(times[0]);
  traj.states.push_back(u);
  traj.velocities.push_back(v);
  SpectralField fk = forcing_at(f, times[0], g);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (i == lat.zero_index()) continue;
      const std::size_t t = tl.index(lat.mode(i));
      // Exact propagator of y'' + w^2 y = f on each eigenspace.
      const CMat C = dec.function(t, [dt](double x) { return std::cos(std::sqrt(x) * dt); });
      const CMat S = dec.function(t, [dt](double x) { return std::sin(std::sqrt(x) * dt) / std::sqrt(x); });
      const CMat W = dec.function(t, [dt](double x) { return std::sqrt(x) * std::sin(std::sqrt(x) * dt); });
      const CMat K = dec.function(t, [dt](double x) {
        const double s = std::sin(0.5 * std::sqrt(x) * dt);
        return 2.0 * s * s / x;
      });
      const CVec uh = u.coeffs(i), vh = v.coeffs(i), fh = fk.coeffs(i);
      u.coeffs(i) = C * uh + S * vh + K * fh;
      v.coeffs(i) = -W * uh + C * vh + S * fh;
    }
    fk = forcing_at(f, times[k], g);
    traj.times.push_back(times[k]);
    traj.states.push_back(u);
    traj.velocities.push_back(v);
  }
  return traj;
}

double navier_hamiltonian(const NavierModeDecomposition& dec, const SpectralField& u, const SpectralField& v) {
  return std::pow(l2(v), 2) + 2.0 * navier_energy(dec, u);
}

double navier_hamiltonian_drift(const NavierModeDecomposition& dec, const Trajectory& traj) {
  if (traj.velocities.size() != traj.states.size()) throw InvalidArgument("trajectory lacks velocities");
  const Lattice& lat = traj.states[0].lattice();
  const Lattice& tl = dec.table().lattice();
  auto mode_h = [&](std::size_t k, std::size_t i) {
    const CVec uh = traj.states[k].coeffs(i), vh = traj.velocities[k].coeffs(i);
    return vh.squaredNorm() + uh.dot(dec.matrix(tl.index(lat.mode(i))) * uh).real();
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const double h0 = mode_h(0, i);
    if (h0 == 0.0) continue;
    for (std::size_t k = 1; k < traj.times.size(); ++k) worst = std::max(worst, std::abs(mode_h(k, i) - h0) / h0);
  }
  return worst;
}

double navier_commutator(const NavierModeDecomposition& first, const NavierModeDecomposition& second) {
  const Lattice& l1 = first.table().lattice();
  const Lattice& l2l = second.table().lattice();
  const int bound = std::min(l1.bound(), l2l.bound());
  const Lattice common(l1.dim(), bound);
  double worst = 0.0;
  for (std::size_t i = 0; i < common.size(); ++i) {
    const Mode m = common.mode(i);
    if (m.is_zero()) continue;
    const CMat a = first.matrix(l1.index(m)), b = second.matrix(l2l.index(m));
    worst = std::max(worst, (a * b - b * a).norm());
  }
  return worst;
}

ResultTable navier_convergence(const std::vector<SymbolTable>& tables, const std::vector<double>& deltas,
                               const SpectralField& f, const Lame& lame) {
  if (tables.size() != deltas.size()) throw InvalidArgument("one symbol table per delta required");
  const SymbolTable local = SymbolTable::local(f.dim(), f.bound());
  const SpectralField ref = navier_steady(navier_decompose(local, lame), f);
  ResultTable out({"delta", "err_v", "err_l2"});
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const SpectralField u = navier_steady(navier_decompose(tables[k], lame), f);
    const SpectralField e = u - ref;
    const FieldNorms nm = norms(e, &tables[k], lame);
    out.add_row({deltas[k], *nm.v_norm, nm.l2});
  }
  return out;
}

ResultTable navier_convergence(const KernelSpec& kernel, const Orientation& n, const SpectralField& f,
                               const std::vector<double>& deltas, const Lame& lame, const SymbolOptions& options) {
  return navier_convergence(build_tables(kernel, n, f.bound(), deltas, options), deltas, f, lame);
}

}  // namespace nlgrad
