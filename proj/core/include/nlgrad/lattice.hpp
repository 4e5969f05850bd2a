#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace nlgrad {

using cplx = std::complex<double>;

/// Small complex vector (at most 3 entries, stack allocated).
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 3, 1>;
/// Small real vector (at most 3 entries, stack allocated).
using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
/// Small complex matrix (at most 3x3).
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Integer wave vector xi in Z^d, d <= 3.
struct Mode {
  std::array<int, 3> k{0, 0, 0};
  int dim = 0;

  int norm2() const { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
  bool is_zero() const { return norm2() == 0; }
  RVec to_real() const;
  Mode operator-() const { return Mode{{-k[0], -k[1], -k[2]}, dim}; }
  bool operator==(const Mode&) const = default;
};

/// Dense index over the cube [-N, N]^d of wave vectors.
///
/// Row-major with the last coordinate fastest. Negation maps index i to
/// size() - 1 - i, and the zero mode sits at the center.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int dim, int bound);

  int dim() const { return dim_; }
  int bound() const { return bound_; }
  int side() const { return 2 * bound_ + 1; }
  std::size_t size() const { return size_; }

  std::size_t index(const Mode& m) const;
  Mode mode(std::size_t index) const;
  bool contains(const Mode& m) const;

  std::size_t zero_index() const { return (size_ - 1) / 2; }
  std::size_t negated(std::size_t index) const { return size_ - 1 - index; }

  /// True for the canonical representative of the pair {xi, -xi}
  /// (first nonzero coordinate positive). The zero mode is excluded.
  bool is_canonical(std::size_t index) const { return index > zero_index(); }

  bool operator==(const Lattice&) const = default;

 private:
  int dim_ = 0;
  int bound_ = 0;
  std::size_t size_ = 0;
};

}  // namespace nlgrad
