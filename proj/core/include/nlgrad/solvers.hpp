#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nlgrad/fields.hpp"
#include "nlgrad/results.hpp"
#include "nlgrad/symbols.hpp"

namespace nlgrad {

// All solvers act mode by mode with closed-form per-mode inverses. Passing
// SymbolTable::local(d, N) gives the classical (delta = 0) counterpart through
// the same code path.

// ---------------------------------------------------------------- Stokes

struct StokesSolution {
  SpectralField velocity;
  SpectralField pressure;
};

/// -L u + G p = f, D u = 0:
///   u^ = (I - lambda lambda^H/|lambda|^2) f^ / |lambda|^2,  p^ = lambda^H f^ / |lambda|^2.
StokesSolution stokes_steady(const SymbolTable& table, const SpectralField& f);

/// Largest per-mode residual of the Stokes system (momentum and
/// divergence), relative to max |f^|.
double stokes_residual(const SymbolTable& table, const StokesSolution& sol, const SpectralField& f);

/// (|u|_S + |p|_L2) / |f|_{S*} with |f|_{S*}^2 = sum |f^|^2 / |lambda|^2.
double stokes_stability_ratio(const SymbolTable& table, const StokesSolution& sol, const SpectralField& f);

/// Errors of the nonlocal Stokes solutions against the local one for each
/// table (one per delta, same order as `deltas`): columns delta, err_u,
/// err_p, err_div (L2 norm of the local divergence of u_delta).
ResultTable stokes_convergence(const std::vector<SymbolTable>& tables, const std::vector<double>& deltas,
                               const SpectralField& f);

/// Convenience overload building the tables from `kernel` rescaled to each delta.
ResultTable stokes_convergence(const KernelSpec& kernel, const Orientation& n, const SpectralField& f,
                               const std::vector<double>& deltas, const SymbolOptions& options = {});

/// Nonlocal Leray projection (I - lambda lambda^H / |lambda|^2) u^.
SpectralField leray_project(const SymbolTable& table, const SpectralField& u);

/// Time-dependent forcing; an empty function means f = 0.
using Forcing = std::function<SpectralField(double t)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;      ///< u(t_k)
  std::vector<SpectralField> velocities;  ///< u_t(t_k) (wave problems only)
  std::vector<SpectralField> pressures;   ///< p(t_k) (Stokes only, when forced)
};

/// u_t - L u + G p = f, D u = 0, u(0) = u0 on the time grid `times`
/// (increasing, starting at 0). f is held constant on each interval at its
/// left-end value and the Duhamel integral is evaluated exactly:
///   u^ <- e^{-a h} u^ + (1 - e^{-a h}) / a  P^ f^,  a = |lambda|^2.
/// Throws IncompatibleData if u0 is not nonlocally divergence free.
Trajectory stokes_evolve(const SymbolTable& table, const SpectralField& u0, const Forcing& f,
                         const std::vector<double>& times);

/// sqrt(int_0^T |u(t) - v(t)|^2 dt) by the trapezoid rule on the common grid.
double trajectory_l2_error(const Trajectory& a, const Trajectory& b);

/// CSV columns t, l2, energy[, error] (error only when a reference is given).
ResultTable trajectory_table(const Trajectory& traj, const SymbolTable& table, const Trajectory* reference = nullptr,
                             const std::optional<Lame>& lame = {});

// ------------------------------------------------------------- Helmholtz

struct Helmholtz2D {
  SpectralField p;
  SpectralField q;
};

/// u = G^n p + J G^{-n} q with J the rotation by +pi/2:
///   p^ = lambda^H u^ / |lambda|^2,  q^ = lambda^T J u^ / |lambda|^2.
Helmholtz2D helmholtz2d(const SymbolTable& table, const SpectralField& u);
SpectralField helmholtz2d_reconstruct(const SymbolTable& table, const Helmholtz2D& parts);

struct Helmholtz3D {
  SpectralField p;
  SpectralField v;
};

/// u = G^n p + C^{-n} v with the gauge D^{-n} v = 0:
///   p^ = lambda^H u^ / |lambda|^2,  v^ = lambda x u^ / |lambda|^2.
Helmholtz3D helmholtz3d(const SymbolTable& table, const SpectralField& u);
SpectralField helmholtz3d_reconstruct(const SymbolTable& table, const Helmholtz3D& parts);

// --------------------------------------------------------------- div-curl

struct DivCurlSolution {
  SpectralField u;
  /// max over modes of |A u^ - b| / max(|b|, tiny), A = [D; C] per mode.
  double residual = 0.0;
};

/// Solves D^n u = f, C^n u = g (three dimensions) by the per-mode normal
/// equations of the stacked 4 x 3 system. Requires the compatibility
/// D^{-n} g = 0, i.e. lambda^T g^ = 0; throws IncompatibleData when the
/// consistency residual exceeds `tolerance`.
DivCurlSolution divcurl3d(const SymbolTable& table, const SpectralField& f, const SpectralField& g,
                          double tolerance = 1e-10);

/// (|u|^2 + |G u|^2) / (|D u|^2 + |C u|^2).
double friedrichs_ratio(const SymbolTable& table, const SpectralField& u);

// ----------------------------------------------------------------- Navier

/// Per-mode spectral data of the Navier operator
///   P^ = mu |lambda|^2 I + (lambda_L + mu) lambda lambda^H = a Pi + b (I - Pi),
/// Pi = lambda lambda^H / |lambda|^2, a = (lambda_L + 2 mu)|lambda|^2, b = mu |lambda|^2.
class NavierModeDecomposition {
 public:
  NavierModeDecomposition(const SymbolTable& table, const Lame& lame);

  const SymbolTable& table() const { return *table_; }
  const Lame& lame() const { return lame_; }
  const CMat& projector(std::size_t index) const { return pi_[index]; }
  double a(std::size_t index) const { return a_[index]; }
  double b(std::size_t index) const { return b_[index]; }
  /// P^ assembled from the decomposition.
  CMat matrix(std::size_t index) const;
  /// phi(P^) = phi(a) Pi + phi(b) (I - Pi).
  template <class Phi>
  CMat function(std::size_t index, Phi&& phi) const {
    const CMat& p = pi_[index];
    const CMat id = CMat::Identity(p.rows(), p.cols());
    return phi(a_[index]) * p + phi(b_[index]) * (id - p);
  }

 private:
  std::shared_ptr<const SymbolTable> table_;
  Lame lame_;
  std::vector<CMat> pi_;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// Throws InvalidArgument unless mu > 0 and lambda_L + 2 mu > 0.
NavierModeDecomposition navier_decompose(const SymbolTable& table, const Lame& lame);

/// P^ u^ = f^:  u^ = Pi f^ / a + (I - Pi) f^ / b.
SpectralField navier_steady(const NavierModeDecomposition& dec, const SpectralField& f);

/// E(u) = 1/2 sum u^H P^ u^.
double navier_energy(const NavierModeDecomposition& dec, const SpectralField& u);

/// Largest per-mode residual |P^ u^ - f^| relative to max |f^|.
double navier_residual(const NavierModeDecomposition& dec, const SpectralField& u, const SpectralField& f);

/// u_tt + P u = f, u(0) = g, u_t(0) = h, with f piecewise constant on the
/// grid and the trigonometric propagator evaluated exactly per eigenspace.
Trajectory navier_evolve(const NavierModeDecomposition& dec, const SpectralField& g, const SpectralField& h,
                         const Forcing& f, const std::vector<double>& times);

/// Per-mode Hamiltonian |u_t^|^2 + u^H P^ u^ at a trajectory sample, summed.
double navier_hamiltonian(const NavierModeDecomposition& dec, const SpectralField& u, const SpectralField& v);

/// Largest per-mode relative drift of the Hamiltonian along a trajectory.
double navier_hamiltonian_drift(const NavierModeDecomposition& dec, const Trajectory& traj);

/// max over modes of |P_1 P_2 - P_2 P_1| (Frobenius).
double navier_commutator(const NavierModeDecomposition& first, const NavierModeDecomposition& second);

/// Steady Navier errors |u_delta - u|_{V_delta} against the local solution:
/// columns delta, err_v, err_l2.
ResultTable navier_convergence(const std::vector<SymbolTable>& tables, const std::vector<double>& deltas,
                               const SpectralField& f, const Lame& lame);

ResultTable navier_convergence(const KernelSpec& kernel, const Orientation& n, const SpectralField& f,
                               const std::vector<double>& deltas, const Lame& lame,
                               const SymbolOptions& options = {});

}  // namespace nlgrad
