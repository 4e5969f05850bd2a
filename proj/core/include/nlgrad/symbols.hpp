#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nlgrad/kernels.hpp"
#include "nlgrad/lattice.hpp"
#include "nlgrad/orientation.hpp"
#include "nlgrad/quadrature.hpp"

namespace nlgrad {

/// Which operator a table describes.
enum class SymbolKind {
  HalfSpace,  ///< one-sided gradient over the half ball H_n
  Star,       ///< modified gradient i Lambda xi/|xi| + m(xi) k
  Local,      ///< classical gradient, lambda = i xi
};

struct SymbolOptions {
  QuadratureOptions quadrature{};
  /// Worker threads for table construction (0: hardware concurrency).
  int threads = 1;
};

/// Fourier symbols lambda(xi) of a gradient-type operator on the lattice
/// [-N, N]^d. Values are complex d-vectors; the zero mode stores 0.
/// Immutable once built.
class SymbolTable {
 public:
  SymbolTable() = default;

  /// The local gradient, lambda = i xi. Serves as the delta -> 0 reference.
  static SymbolTable local(int dim, int bound);

  SymbolKind kind() const { return kind_; }
  const Lattice& lattice() const { return lattice_; }
  int dim() const { return lattice_.dim(); }
  int bound() const { return lattice_.bound(); }
  const std::optional<KernelSpec>& kernel() const { return kernel_; }
  const std::optional<Orientation>& orientation() const { return orientation_; }
  /// Modification vector k of a Star table.
  const RVec& star_vector() const { return star_; }
  double tolerance() const { return tolerance_; }

  const CVec& operator[](std::size_t index) const { return values_[index]; }
  const CVec& at(const Mode& m) const;
  std::span<const CVec> values() const { return values_; }

  /// Lambda(|xi|) keyed by the integer |xi|^2; available for every nonzero
  /// |xi|^2 occurring on the lattice.
  double lambda_radial(int norm2) const;
  const std::map<int, double>& lambda_radial_table() const { return radial_; }

  /// Table of the opposite orientation, lambda^{-n} = -conj(lambda^n),
  /// obtained exactly from this one.
  SymbolTable reflected() const;

  /// Writes the portable text cache (header + one line per mode).
  void save(const std::filesystem::path& path) const;
  /// Reads a cache written by save(). Throws InvalidArgument on malformed files.
  static SymbolTable load(const std::filesystem::path& path);

 private:
  friend SymbolTable build_table(const KernelSpec&, const Orientation&, int, const SymbolOptions&);
  friend SymbolTable build_star_table(const KernelSpec&, const RVec&, int, const SymbolOptions&);

  void rebuild_radial();

  SymbolKind kind_ = SymbolKind::Local;
  Lattice lattice_;
  std::optional<KernelSpec> kernel_;
  std::optional<Orientation> orientation_;
  RVec star_;
  double tolerance_ = 0.0;
  std::vector<CVec> values_;
  std::map<int, double> radial_;
};

/// Symbols of the half-space gradient G^n on [-N, N]^d. Re lambda comes from
/// half-ball quadrature of 2 w s/|s| (cos(xi.s) - 1); Im lambda is
/// Lambda(|xi|) xi/|xi|. One refinement level is selected per table from
/// the hardest probe modes and verified against the next finer level.
/// Throws QuadratureError on non-convergence and Error if some |lambda| = 0.
SymbolTable build_table(const KernelSpec& kernel, const Orientation& n, int bound, const SymbolOptions& options = {});

/// Symbols of the modified gradient G*^k.
SymbolTable build_star_table(const KernelSpec& kernel, const RVec& kvec, int bound, const SymbolOptions& options = {});

/// lambda^n(xi) for an arbitrary real wave vector, by direct adaptive
/// half-ball quadrature of 2 w s/|s| (e^{i xi.s} - 1). Independent of the
/// table path (no Re/Im split).
CVec symbol(const KernelSpec& kernel, const Orientation& n, const RVec& xi, const QuadratureOptions& options = {});

/// Lambda(|xi|) = int_{B_delta} w (s.xi^)/|s| sin(xi.s) ds; zero at |xi| = 0.
double lambda_radial(const KernelSpec& kernel, double xi_norm, const QuadratureOptions& options = {});

/// m(xi) = int_{B_delta} w (cos(xi.s) - 1) ds <= 0.
double m_delta(const KernelSpec& kernel, const RVec& xi, const QuadratureOptions& options = {});

/// mu*(xi) = i Lambda(|xi|) xi/|xi| + m(xi) k.
CVec star_symbol(const KernelSpec& kernel, const RVec& kvec, const RVec& xi, const QuadratureOptions& options = {});

/// Orientation average (1/2pi) int_{S^1} |lambda^n(xi)|^2 dn by the
/// trapezoid rule on `samples` equispaced orientations (two dimensions).
double averaged_energy_density(const KernelSpec& kernel, const RVec& xi, int samples,
                               const QuadratureOptions& options = {});

struct BoundsReport {
  double min_abs = 0.0;    ///< min over xi != 0 of |lambda(xi)|
  double max_ratio = 0.0;  ///< max over xi != 0 of |lambda(xi)| / |xi|
  Mode argmin;
  Mode argmax;
  /// Upper bound sqrt(2) d from the uniform spectral estimate.
  double upper_bound = 0.0;
  bool holds(double slack = 1e-8) const { return min_abs > 0.0 && max_ratio <= upper_bound + slack; }
};

BoundsReport verify_bounds(const SymbolTable& table);

std::string to_string(SymbolKind kind);

}  // namespace nlgrad
