#pragma once

#include <functional>

#include "nlgrad/fields.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/quadrature.hpp"
#include "nlgrad/symbols.hpp"

namespace nlgrad {

// Spectral operators. Every operator multiplies each Fourier mode by its
// symbol; the table must cover the field's truncation.

/// G u: a scalar field becomes a vector field (lambda u^); a vector field
/// becomes a d x d matrix field with entry (a, b) = lambda_a u^_b.
SpectralField gradient(const SymbolTable& table, const SpectralField& u);

/// D u for a vector field: (lambda^{-n})^T u^ = -lambda^H u^.
SpectralField divergence(const SymbolTable& table, const SpectralField& u);

/// L u = D(G u): multiplies every component by -|lambda|^2.
SpectralField diffusion(const SymbolTable& table, const SpectralField& u);

/// Nonlocal curl of a 3-vector field: lambda x v^ for sign +1 and
/// lambda^{-n} x v^ = (-conj lambda) x v^ for sign -1. The cross product is
/// bilinear (no conjugation).
SpectralField curl3d(const SymbolTable& table, const SpectralField& v, int orientation_sign = 1);

/// Symmetric strain (G u + (G u)^T) / 2 as a d x d matrix field.
SpectralField strain(const SymbolTable& table, const SpectralField& u);

/// Modified gradient G*^k u from a Star table.
SpectralField star_gradient(const SymbolTable& star_table, const SpectralField& u);

/// Complex cross product a x b without conjugation.
CVec cross(const CVec& a, const CVec& b);

// One-dimensional averaging and doubly nonlocal operators.

/// a_eps(xi) = 1/2 + 1/2 int eta_eps(|z|) cos(xi z) dz; eta must carry the
/// unit-mass normalization.
double averaging_symbol(const KernelSpec& eta, double xi);

/// Symbol of the bond-based operator L u = 2 int k(|a|)(u(x+a) - u(x)) da
/// with k the given kernel: 4 int_0^delta k(a)(cos(xi a) - 1) da.
double bond_symbol(const KernelSpec& k, double xi);

/// Symbol of the doubly nonlocal Laplacian from its defining double
/// integral over (y, r) in (-delta, delta) x (-eps, eps), evaluated on the
/// same tensor nodes as the factors.
double double_laplacian_symbol(const KernelSpec& gamma, const KernelSpec& eta, double xi);

SpectralField averaging_1d(const KernelSpec& eta, const SpectralField& u);
SpectralField double_laplacian_1d(const KernelSpec& gamma, const KernelSpec& eta, const SpectralField& u);

// Physical-space oracle: direct quadrature of the defining integrals.

using PointFunction = std::function<CVecX(const RVec&)>;

/// 2 int_{H_n cap B_delta} w(|s|) s/|s| (u(x+s) - u(x))^T ds as a d x m matrix
/// for an m-component function u evaluated analytically (need not be periodic).
Eigen::MatrixXcd gradient_oracle(const KernelSpec& kernel, const Orientation& n, const PointFunction& u,
                                 const RVec& x, const QuadratureOptions& options = {});

/// 2 int_{H_{-n} cap B_delta} w(|s|) s/|s| . (v(x+s) - v(x)) ds for a d-vector function v.
cplx divergence_oracle(const KernelSpec& kernel, const Orientation& n, const PointFunction& v, const RVec& x,
                       const QuadratureOptions& options = {});

/// Gradient oracle on every point of a G^d grid (components d*m, row-major).
GridSamples gradient_oracle_grid(const KernelSpec& kernel, const Orientation& n, const PointFunction& u, int components,
                                 int grid, const QuadratureOptions& options = {}, int threads = 1);

/// Divergence oracle on every point of a G^d grid.
GridSamples divergence_oracle_grid(const KernelSpec& kernel, const Orientation& n, const PointFunction& v, int grid,
                                   const QuadratureOptions& options = {}, int threads = 1);

}  // namespace nlgrad
