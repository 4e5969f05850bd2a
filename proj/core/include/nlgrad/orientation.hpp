#pragma once

#include "nlgrad/lattice.hpp"

namespace nlgrad {

/// Unit vector n defining the half-space H_n = {z : z . n >= 0}.
class Orientation {
 public:
  /// Throws unless |n| = 1 within 1e-14.
  explicit Orientation(const RVec& n);

  static Orientation normalized(const RVec& v);
  /// (cos theta, sin theta) in two dimensions.
  static Orientation angle(double theta);
  /// +-e_axis in the given dimension.
  static Orientation axis(int dim, int axis, double sign = 1.0);

  const RVec& vector() const { return n_; }
  int dim() const { return static_cast<int>(n_.size()); }
  Orientation operator-() const { return Orientation(RVec(-n_)); }

 private:
  RVec n_;
};

}  // namespace nlgrad
