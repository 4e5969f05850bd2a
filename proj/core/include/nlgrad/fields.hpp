#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlgrad/lattice.hpp"

namespace nlgrad {

class SymbolTable;

using CVecX = Eigen::VectorXcd;

/// Periodic field on (-pi, pi)^d stored as Fourier coefficients over the
/// dense lattice [-N, N]^d:  u(x) = sum_xi u^(xi) exp(i xi . x).
///
/// Each mode carries `components` complex numbers: 1 for scalars, d for
/// vectors, d*d (row-major) for matrix fields. The zero mode is held at
/// exactly 0. `is_real()` records that u^(-xi) = conj(u^(xi)).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int dim, int bound, int components, bool real = true);

  static SpectralField scalar(int dim, int bound, bool real = true) { return {dim, bound, 1, real}; }
  static SpectralField vector(int dim, int bound, bool real = true) { return {dim, bound, dim, real}; }

  int dim() const { return lattice_.dim(); }
  int bound() const { return lattice_.bound(); }
  int components() const { return components_; }
  bool is_real() const { return real_; }
  const Lattice& lattice() const { return lattice_; }
  std::size_t size() const { return lattice_.size(); }

  Eigen::Map<CVecX> coeffs(std::size_t index) {
    return {data_.data() + index * static_cast<std::size_t>(components_), components_};
  }
  Eigen::Map<const CVecX> coeffs(std::size_t index) const {
    return {data_.data() + index * static_cast<std::size_t>(components_), components_};
  }
  Eigen::Map<const CVecX> at(const Mode& m) const;

  /// Sets mode m; for real fields also sets -m to the conjugate. Setting the
  /// zero mode is rejected.
  void set(const Mode& m, const CVecX& value);

  /// Forces the zero mode to 0.
  void clear_mean();
  /// max |u^(xi) - conj(u^(-xi))| over the lattice.
  double hermitian_defect() const;
  /// Overrides the realness flag (callers vouch for the symmetry).
  void set_real(bool real) { real_ = real; }

  std::span<const cplx> raw() const { return data_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  /// Component c as a scalar field.
  SpectralField component(int c) const;
  /// Field with the same coefficients on a larger lattice (zero padded).
  SpectralField padded(int bound) const;

 private:
  void require_compatible(const SpectralField& other) const;

  Lattice lattice_;
  int components_ = 1;
  bool real_ = true;
  std::vector<cplx> data_;
};

/// Values on the uniform grid x_j = -pi + 2 pi j / G, point-major
/// (row-major over grid points, last axis fastest), `components` per point.
struct GridSamples {
  int dim = 0;
  int grid = 0;
  int components = 1;
  std::vector<cplx> values;

  std::size_t points() const;
  double coordinate(int j) const;
  /// Coordinates of flat point index p.
  RVec point(std::size_t p) const;
};

struct ForwardResult {
  SpectralField field;
  /// Removed mean per component.
  std::vector<cplx> mean;
};

/// Discrete Fourier coefficients of grid samples truncated to [-N, N]^d.
/// Requires grid >= 2N + 1. Real samples produce a Hermitian-symmetric
/// field. Thread safe.
ForwardResult forward_transform(const GridSamples& samples, int bound);

/// Samples of the field on a G^d grid (G >= 2N + 1). Thread safe.
GridSamples inverse_transform(const SpectralField& field, int grid);

/// Samples an analytic function on the grid.
GridSamples sample(int dim, int grid, int components, const std::function<CVecX(const RVec&)>& f);

/// sum_xi u^(xi) exp(i xi . x), all components.
CVecX evaluate(const SpectralField& field, const RVec& x);

/// <u, v> = sum_xi sum_c u^_c(xi) conj(v^_c(xi)).
cplx inner(const SpectralField& u, const SpectralField& v);

/// Lame constants of isotropic linear elasticity.
struct Lame {
  double mu = 1.0;
  double lambda = 1.0;
};

struct FieldNorms {
  double l2 = 0.0;
  std::optional<double> energy;  ///< (sum |lambda|^2 |u^|^2)^(1/2)
  std::optional<double> v_norm;  ///< (L2^2 + E)^(1/2) with E the elastic energy
};

/// Coefficient-sum norms (no (2 pi)^d factor). The energy norm needs a
/// table, the elastic V-norm a vector field, a table and Lame constants.
FieldNorms norms(const SpectralField& u, const SymbolTable* table = nullptr, const std::optional<Lame>& lame = {});

/// Elastic energy E(u) = lambda/2 |D u|^2 + mu |e(u)|^2 per mode:
/// 2E = sum mu |lambda|^2 |u^|^2 + (lambda_L + mu) |lambda^H u^|^2.
double elastic_energy(const SpectralField& u, const SymbolTable& table, const Lame& lame);

/// Real zero-mean field with |u^(xi)| = (1 + |xi|^2)^(-s/2) and uniform
/// random phases from a 64-bit linear congruential generator seeded with
/// `seed`. Identical on every platform.
SpectralField random_field(std::uint64_t seed, int dim, int bound, int components, double decay);

/// CSV snapshot: "k1,...,kd,re0,im0,re1,im1,..." per mode.
void write_field_csv(const SpectralField& field, const std::filesystem::path& path);

}  // namespace nlgrad
