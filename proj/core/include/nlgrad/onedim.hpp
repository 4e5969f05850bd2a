#pragma once

#include <filesystem>
#include <vector>

#include "nlgrad/fields.hpp"
#include "nlgrad/kernels.hpp"

namespace nlgrad {

/// One-dimensional one-sided operators and the bond kernel rho that turns
/// the one-sided Dirichlet energy into a two-point (bond) energy:
///
///   rho(a) = 2 a^2 int_0^delta w(b) (w(a) - w(a + b)) db,   0 < a < delta,
///
/// extended evenly and by zero outside (-delta, delta). For integrable w it
/// splits as rho = k + h with
///   k(a) = 2 a^2 w(a) int_0^delta w,   h(a) = -2 a^2 int_0^{delta-a} w(z + a) w(z) dz.

struct RhoOptions {
  /// Relative agreement between successive refinements of every integral.
  double tolerance = 1e-11;
  /// Tabulation points in (0, delta), clustered at both ends.
  int mesh_points = 2048;
  int threads = 1;
};

struct RhoKernel {
  double delta = 0.0;
  std::vector<double> mesh;
  std::vector<double> rho;
  /// k and h on the mesh; empty when w is not integrable.
  std::vector<double> k_part;
  std::vector<double> h_part;
  /// ||rho||_{L1(R)} = 2 int_0^delta rho, by quadrature of the defining integral.
  double mass = 0.0;

  /// Piecewise-linear interpolant, even, zero for |a| >= delta.
  double value(double a) const;
};

/// {delta (1 - cos(pi i/(M+1))) / 2 : i = 1..M}.
std::vector<double> rho_mesh(double delta, int points);

/// rho(a) for 0 < a < delta by graded Gauss-Legendre quadrature; valid for
/// power-singular kernels as the integrand is O(b^{1 - beta}) at b = 0.
double rho_at(const KernelSpec& kernel, double a, double tolerance = 1e-11);
/// k(a); throws NonIntegrable for singular kernels.
double rho_k_part(const KernelSpec& kernel, double a, double tolerance = 1e-11);
/// h(a); throws NonIntegrable for singular kernels.
double rho_h_part(const KernelSpec& kernel, double a, double tolerance = 1e-11);
/// -a^2 (G+ w)(a) through the generic interval quadrature; an independent
/// route to rho(a).
double rho_via_gradient(const KernelSpec& kernel, double a, double tolerance = 1e-10);

/// 2 int_0^delta rho(a) da.
double rho_mass(const KernelSpec& kernel, double tolerance = 1e-11);

/// 2 int_0^delta g(a) rho(a) da for a smooth weight g.
double rho_weighted_integral(const KernelSpec& kernel, const std::function<double(double)>& g,
                             double tolerance = 1e-11);

/// Tabulates rho, k, h on the mesh. Throws NonIntegrable for singular kernels
/// (use rho_regularized).
RhoKernel rho_from_kernel(const KernelSpec& kernel, const RhoOptions& options = {});

struct RegularizedRho {
  std::vector<double> eps;
  /// rho built from the epsilon-cutoff kernels, one per eps.
  std::vector<RhoKernel> stages;
  /// rho of the uncut kernel (the pointwise limit), evaluated directly.
  RhoKernel limit;
  /// Richardson extrapolation of the stage masses (linear in eps).
  double extrapolated_mass = 0.0;
  /// max over the mesh of (rho_{eps_k}(a) - rho_{eps_{k+1}}(a))_+ relative to max rho.
  double monotonicity_violation = 0.0;
};

/// Regularized path for non-increasing kernels (including fractional ones).
/// Throws InvalidArgument for kernels that are not non-increasing.
RegularizedRho rho_regularized(const KernelSpec& kernel, std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5},
                               const RhoOptions& options = {});

/// int_{-delta}^{delta} h (quadrature) and the closed-form right-hand side
/// (int |s| w)^2 - (int s^2 w)(int w), whose first term is 1 for normalized kernels.
struct HIdentity {
  double integral = 0.0;
  double expected = 0.0;
};
HIdentity h_identity(const KernelSpec& kernel, double tolerance = 1e-11);

/// Symbol of the bond operator 2 int k(|a|)(u(x+a) - u(x)) da with k = rho/a^2:
/// 4 int_0^delta rho(a)/a^2 (cos(xi a) - 1) da.
double rho_bond_symbol(const KernelSpec& kernel, double xi, double tolerance = 1e-11);

/// lambda+(xi) = 2 int_0^delta w(s)(e^{i xi s} - 1) ds.
cplx one_sided_symbol(const KernelSpec& kernel, double xi, int sign = 1);

struct EnergyCheck {
  double e_plus = 0.0;   ///< 2 pi sum |lambda+|^2 |u^|^2 = int |G+ u|^2
  double e_minus = 0.0;  ///< same with lambda-
  double e_rho = 0.0;    ///< 2 int_Omega int_0^delta rho |(u(x+a) - u(x))/a|^2 da dx
  double gap = 0.0;      ///< |e_plus - e_rho| / max(e_plus, tiny)
};

/// Compares the spectral one-sided energy with the bond form for a real
/// one-dimensional field (x by the trapezoid rule on a 4N+8 point grid, a by
/// graded Gauss-Legendre).
EnergyCheck energy_equivalence_check(const KernelSpec& kernel, const SpectralField& u, double tolerance = 1e-11);

/// CSV with columns a,rho[,k,h].
void write_rho_csv(const RhoKernel& rho, const std::filesystem::path& path);

}  // namespace nlgrad
