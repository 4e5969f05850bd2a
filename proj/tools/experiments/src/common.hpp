#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlgrad/fields.hpp>
#include <nlgrad/kernels.hpp>
#include <nlgrad/symbols.hpp>

#include "nlgrad_tools/config.hpp"

namespace nlgrad::tools::detail {

inline double family_code(KernelFamily f) { return static_cast<double>(static_cast<int>(f)); }

inline SymbolOptions symbol_options(const Config& config, int threads) {
  SymbolOptions o;
  o.threads = threads;
  o.quadrature.tolerance = config.tolerance("quadrature", 1e-10);
  return o;
}

/// max over modes of |a^(xi) - b^(xi)| divided by max(max_xi |b^(xi)|, tiny).
inline double per_mode_residual(const SpectralField& a, const SpectralField& b, double floor = 1e-300) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, (a.coeffs(i) - b.coeffs(i)).norm());
    scale = std::max(scale, b.coeffs(i).norm());
  }
  return worst / std::max(scale, floor);
}

/// max over modes of |a^(xi)| relative to `scale`.
inline double max_mode(const SpectralField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a.coeffs(i).norm());
  return m;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
inline double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace nlgrad::tools::detail
