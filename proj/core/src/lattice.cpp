#include "nlgrad/lattice.hpp"

#include <cstdlib>

#include "nlgrad/error.hpp"

namespace nlgrad {

RVec Mode::to_real() const {
  RVec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = k[i];
  return v;
}

Lattice::Lattice(int dim, int bound) : dim_(dim), bound_(bound) {
  if (dim < 1 || dim > 3) throw InvalidArgument("lattice dimension must be 1, 2 or 3");
  if (bound < 0) throw InvalidArgument("lattice bound must be non-negative");
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(side());
}

std::size_t Lattice::index(const Mode& m) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) idx = idx * side() + static_cast<std::size_t>(m.k[i] + bound_);
  return idx;
}

Mode Lattice::mode(std::size_t index) const {
  Mode m;
  m.dim = dim_;
  for (int i = dim_ - 1; i >= 0; --i) {
    m.k[i] = static_cast<int>(index % side()) - bound_;
    index /= side();
  }
  return m;
}

bool Lattice::contains(const Mode& m) const {
  if (m.dim != dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if (std::abs(m.k[i]) > bound_) return false;
  return true;
}

}  // namespace nlgrad
