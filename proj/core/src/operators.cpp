#include "nlgrad/operators.hpp"

#include <cmath>

#include "nlgrad/error.hpp"
#include "nlgrad/parallel.hpp"

namespace nlgrad {
namespace {

void require_cover(const SymbolTable& table, const SpectralField& u) {
  if (table.dim() != u.dim()) throw InvalidArgument("symbol table and field dimensions differ");
  if (table.bound() < u.bound()) throw InvalidArgument("symbol table does not cover the field truncation");
}

// Applies out^(xi) = op(lambda(xi), u^(xi)) mode by mode; zero mode stays 0.
template <class Op>
SpectralField map_modes(const SymbolTable& table, const SpectralField& u, int out_components, Op&& op) {
  require_cover(table, u);
  SpectralField out(u.dim(), u.bound(), out_components, u.is_real());
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    out.coeffs(i) = op(table.at(lat.mode(i)), u.coeffs(i));
  }
  return out;
}

struct IntervalRule {
  std::vector<double> nodes;  // physical s in (0, delta]
  std::vector<double> weights;
};

// Fixed Gauss-Legendre rule for int_0^delta w_delta(s) g(s) ds resolving
// cos(xi s) with ample margin.
IntervalRule interval_rule(const KernelSpec& k, double xi, int level) {
  if (k.dimension() != 1) throw InvalidArgument("one-dimensional kernel required");
  const double ppu = (4.0 + k.horizon() * std::abs(xi)) * (1 << level);
  const RadialRule r = make_radial_rule(k, ppu, 0);
  IntervalRule out;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out.nodes.push_back(k.horizon() * r.nodes[i]);
    out.weights.push_back(r.weights[i] * k.integral_scale());
  }
  return out;
}

template <class Eval>
double converged(Eval&& eval, const char* what) {
  const double coarse = eval(0);
  const double fine = eval(1);
  if (std::abs(fine - coarse) > 1e-12 * std::max(std::abs(fine), 1e-300) && std::abs(fine - coarse) > 1e-15)
    throw QuadratureError(std::string(what) + ": interval rule not resolved");
  return fine;
}

}  // namespace

CVec cross(const CVec& a, const CVec& b) {
  if (a.size() != 3 || b.size() != 3) throw InvalidArgument("cross product needs 3-vectors");
  CVec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

SpectralField gradient(const SymbolTable& table, const SpectralField& u) {
  const int d = u.dim();
  if (u.components() == 1)
    return map_modes(table, u, d, [](const CVec& lam, const auto& uh) { return CVecX(lam * uh[0]); });
  if (u.components() != d) throw InvalidArgument("gradient needs a scalar or d-vector field");
  return map_modes(table, u, d * d, [d](const CVec& lam, const auto& uh) {
    CVecX out(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out[a * d + b] = lam[a] * uh[b];
    return out;
  });
}

SpectralField divergence(const SymbolTable& table, const SpectralField& u) {
  if (u.components() != u.dim()) throw InvalidArgument("divergence needs a d-vector field");
  return map_modes(table, u, 1, [](const CVec& lam, const auto& uh) {
    CVecX out(1);
    out[0] = -lam.dot(CVec(uh));
    return out;
  });
}

SpectralField diffusion(const SymbolTable& table, const SpectralField& u) {
  return map_modes(table, u, u.components(),
                   [](const CVec& lam, const auto& uh) { return CVecX(-lam.squaredNorm() * uh); });
}

SpectralField curl3d(const SymbolTable& table, const SpectralField& v, int orientation_sign) {
  if (v.dim() != 3 || v.components() != 3) throw InvalidArgument("curl needs a 3-vector field in three dimensions");
  if (orientation_sign != 1 && orientation_sign != -1) throw InvalidArgument("orientation sign must be +1 or -1");
  return map_modes(table, v, 3, [orientation_sign](const CVec& lam, const auto& vh) {
    const CVec l = orientation_sign > 0 ? lam : CVec(-lam.conjugate());
    return CVecX(cross(l, CVec(vh)));
  });
}

SpectralField strain(const SymbolTable& table, const SpectralField& u) {
  const int d = u.dim();
  if (u.components() != d) throw InvalidArgument("strain needs a d-vector field");
  return map_modes(table, u, d * d, [d](const CVec& lam, const auto& uh) {
    CVecX out(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out[a * d + b] = 0.5 * (lam[a] * uh[b] + lam[b] * uh[a]);
    return out;
  });
}

SpectralField star_gradient(const SymbolTable& star_table, const SpectralField& u) {
  if (star_table.kind() != SymbolKind::Star) throw InvalidArgument("star_gradient needs a Star symbol table");
  return gradient(star_table, u);
}

double averaging_symbol(const KernelSpec& eta, double xi) {
  if (eta.dimension() != 1 || eta.normalization_kind() != Normalization::UnitMass)
    throw InvalidArgument("averaging kernel must be one-dimensional with unit mass");
  return converged(
      [&](int level) {
        const IntervalRule r = interval_rule(eta, xi, level);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::cos(xi * r.nodes[i]);
        return 0.5 + s;  // 1/2 * (2 int_0^eps)
      },
      "averaging symbol");
}

double bond_symbol(const KernelSpec& k, double xi) {
  return converged(
      [&](int level) {
        const IntervalRule r = interval_rule(k, xi, level);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
          const double h = std::sin(0.5 * xi * r.nodes[i]);
          s += r.weights[i] * (-2.0 * h * h);
        }
        return 4.0 * s;
      },
      "bond symbol");
}

double double_laplacian_symbol(const KernelSpec& gamma, const KernelSpec& eta, double xi) {
  if (eta.dimension() != 1 || eta.normalization_kind() != Normalization::UnitMass)
    throw InvalidArgument("averaging kernel must be one-dimensional with unit mass");
  if (gamma.dimension() != 1) throw InvalidArgument("bond kernel must be one-dimensional");
  return converged(
      [&](int level) {
        const IntervalRule g = interval_rule(gamma, xi, level);
        const IntervalRule e = interval_rule(eta, xi, level);
        // Both kernels are even: sum over the mirrored nodes +-y, +-r.
        double total = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          for (int sy : {-1, 1}) {
            const double y = sy * g.nodes[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < e.nodes.size(); ++j) {
              for (int sr : {-1, 1}) {
                const double r = sr * e.nodes[j];
                inner += e.weights[j] * (std::cos((y + r) * xi) - 1.0 - std::cos(r * xi) + std::cos(y * xi));
              }
            }
            total += g.weights[i] * inner;
          }
        }
        return total;
      },
      "doubly nonlocal symbol");
}

SpectralField averaging_1d(const KernelSpec& eta, const SpectralField& u) {
  if (u.dim() != 1) throw InvalidArgument("averaging operator acts on one-dimensional fields");
  SpectralField out = u;
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) out.coeffs(i) *= averaging_symbol(eta, lat.mode(i).k[0]);
  out.clear_mean();
  return out;
}

SpectralField double_laplacian_1d(const KernelSpec& gamma, const KernelSpec& eta, const SpectralField& u) {
  if (u.dim() != 1) throw InvalidArgument("doubly nonlocal Laplacian acts on one-dimensional fields");
  SpectralField out = u;
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double xi = lat.mode(i).k[0];
    out.coeffs(i) *= bond_symbol(gamma, xi) * averaging_symbol(eta, xi);
  }
  out.clear_mean();
  return out;
}

Eigen::MatrixXcd gradient_oracle(const KernelSpec& kernel, const Orientation& n, const PointFunction& u,
                                 const RVec& x, const QuadratureOptions& options) {
  const int d = kernel.dimension();
  if (x.size() != d) throw InvalidArgument("evaluation point has the wrong dimension");
  const CVecX ux = u(x);
  const int m = static_cast<int>(ux.size());
  const CVec flat = integrate_halfball(
      kernel, n,
      [&](double r, const RVec& e) {
        const CVecX diff = u(RVec(x + r * e)) - ux;
        // The integrand is d*m entries; fold into a CVec by integrating each
        // component separately below when it exceeds three entries.
        CVec v(std::min(d * m, 3));
        for (int k = 0; k < v.size(); ++k) v[k] = 2.0 * e[k / m] * diff[k % m];
        return v;
      },
      options, 0.0, 1);
  Eigen::MatrixXcd out(d, m);
  if (d * m <= 3) {
    for (int k = 0; k < d * m; ++k) out(k / m, k % m) = flat[k];
    return out;
  }
  for (int a = 0; a < d; ++a) {
    const CVec row = integrate_halfball(
        kernel, n,
        [&](double r, const RVec& e) {
          const CVecX diff = u(RVec(x + r * e)) - ux;
          CVec v(m);
          for (int b = 0; b < m; ++b) v[b] = 2.0 * e[a] * diff[b];
          return v;
        },
        options, 0.0, 1);
    for (int b = 0; b < m; ++b) out(a, b) = row[b];
  }
  return out;
}

cplx divergence_oracle(const KernelSpec& kernel, const Orientation& n, const PointFunction& v, const RVec& x,
                       const QuadratureOptions& options) {
  const int d = kernel.dimension();
  if (x.size() != d) throw InvalidArgument("evaluation point has the wrong dimension");
  const CVecX vx = v(x);
  if (vx.size() != d) throw InvalidArgument("divergence oracle needs a d-vector function");
  const CVec s = integrate_halfball(
      kernel, -n,
      [&](double r, const RVec& e) {
        const CVecX diff = v(RVec(x + r * e)) - vx;
        CVec out(1);
        out[0] = 2.0 * e.cast<cplx>().dot(CVec(diff));
        return out;
      },
      options, 0.0, 1);
  return s[0];
}

GridSamples gradient_oracle_grid(const KernelSpec& kernel, const Orientation& n, const PointFunction& u, int components,
                                 int grid, const QuadratureOptions& options, int threads) {
  const int d = kernel.dimension();
  GridSamples out{d, grid, d * components, {}};
  out.values.resize(out.points() * static_cast<std::size_t>(d * components));
  parallel_for(out.points(), threads, [&](std::size_t p) {
    const Eigen::MatrixXcd g = gradient_oracle(kernel, n, u, out.point(p), options);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < components; ++b) out.values[p * d * components + a * components + b] = g(a, b);
  });
  return out;
}

GridSamples divergence_oracle_grid(const KernelSpec& kernel, const Orientation& n, const PointFunction& v, int grid,
                                   const QuadratureOptions& options, int threads) {
  GridSamples out{kernel.dimension(), grid, 1, {}};
  out.values.resize(out.points());
  parallel_for(out.points(), threads,
               [&](std::size_t p) { out.values[p] = divergence_oracle(kernel, n, v, out.point(p), options); });
  return out;
}

}  // namespace nlgrad
