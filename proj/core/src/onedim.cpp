#include "nlgrad/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "nlgrad/error.hpp"
#include "nlgrad/gauss_legendre.hpp"
#include "nlgrad/parallel.hpp"
#include "nlgrad/quadrature.hpp"
#include "nlgrad/results.hpp"
#include "nlgrad/symbols.hpp"

namespace nlgrad {

namespace {

constexpr int kOrder = 12;
constexpr int kMaxSub = 64;

void require_one_dimensional(const KernelSpec& kernel) {
  if (kernel.dimension() != 1) throw InvalidArgument("bond kernels are defined for one-dimensional kernels");
}

/// Sorted, deduplicated breakpoints clipped to [lo, hi].
std::vector<double> clean_breaks(std::vector<double> pts, double lo, double hi) {
  pts.push_back(lo);
  pts.push_back(hi);
  std::erase_if(pts, [&](double x) { return !(x >= lo && x <= hi); });
  std::sort(pts.begin(), pts.end());
  const double tiny = 1e-14 * (hi - lo);
  std::vector<double> out;
  for (double x : pts)
    if (out.empty() || x - out.back() > tiny) out.push_back(x);
  out.back() = hi;
  return out;
}

/// Composite Gauss-Legendre value and absolute value of f over `breaks`.
template <class F>
std::pair<double, double> composite(F&& f, const std::vector<double>& breaks, int sub) {
  const GaussRule& g = gauss_legendre(kOrder);
  double total = 0.0, magnitude = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / sub;
    for (int p = 0; p < sub; ++p) {
      const double mid = breaks[i] + (p + 0.5) * h;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double v = 0.5 * h * g.weights[q] * f(mid + 0.5 * h * g.nodes[q]);
        total += v;
        magnitude += std::abs(v);
      }
    }
  }
  return {total, magnitude};
}

/// Doubles the panel subdivision until two passes agree relative to the
/// absolute integral.
template <class Eval>
double refine(Eval&& eval, double tolerance, const char* what, double floor = 0.0) {
  double previous = eval(1).first;
  for (int sub = 2; sub <= kMaxSub; sub *= 2) {
    auto [current, mag] = eval(sub);
    if (std::abs(current - previous) <= tolerance * std::max(mag, 1e-300) + floor) return current;
    previous = current;
  }
  throw QuadratureError(std::string(what) + " did not converge");
}

/// Round-off level of integrals of products of two kernel values; w(a + b)
/// near the support end carries an absolute error of order eps * max w.
double product_floor(const KernelSpec& kernel) {
  double peak = 0.0;
  for (double r : {0.25, 0.5, 0.75, 1.0}) peak = std::max(peak, kernel.eval(r * kernel.horizon()));
  return 64.0 * std::numeric_limits<double>::epsilon() * peak * peak * kernel.horizon();
}

/// Features of the kernel that any integrand built from w has kinks at.
std::vector<double> kernel_features(const KernelSpec& kernel) {
  const double delta = kernel.horizon();
  std::vector<double> pts;
  for (double r : kernel.profile().breakpoints()) pts.push_back(r * delta);
  if (kernel.cutoff() > 0.0) pts.push_back(kernel.cutoff());
  return pts;
}

/// Integrates a function of a over (0, delta) that may carry logarithmic or
/// power behaviour at either end and kinks at kernel features (both a = r
/// and a = delta - r).
double integrate_over_horizon(const KernelSpec& kernel, const std::function<double(double)>& f, double tolerance,
                              const char* what) {
  const double delta = kernel.horizon();
  std::vector<double> pts = graded_both(0.0, delta, 0.2, 14);
  for (double r : kernel_features(kernel)) {
    pts.push_back(r);
    pts.push_back(delta - r);
    for (double s = 0.2; s > 1e-4; s *= 0.2) {
      pts.push_back(r * (1.0 - s));
      pts.push_back(r * (1.0 + s));
    }
  }
  const auto breaks = clean_breaks(std::move(pts), 0.0, delta);
  return refine([&](int sub) { return composite(f, breaks, sub); }, tolerance, what);
}

double first_moment_part(const KernelSpec& kernel, int power, double tolerance) {
  QuadratureOptions q;
  q.tolerance = tolerance;
  q.max_level = 10;
  return 2.0 * integrate_interval(kernel, 0.0, kernel.horizon(), [power](double s) { return std::pow(s, power); },
                                  power, q);
}

}  // namespace

std::vector<double> rho_mesh(double delta, int points) {
  if (points < 2) throw InvalidArgument("rho mesh needs at least two points");
  std::vector<double> mesh(static_cast<std::size_t>(points));
  for (int i = 1; i <= points; ++i)
    mesh[i - 1] = 0.5 * delta * (1.0 - std::cos(std::numbers::pi * i / (points + 1)));
  return mesh;
}

double rho_at(const KernelSpec& kernel, double a, double tolerance) {
  require_one_dimensional(kernel);
  const double delta = kernel.horizon();
  if (!(a > 0.0 && a < delta)) return 0.0;
  const double wa = kernel.eval(a);
  auto inner = [&](double b) { return wa - (a + b <= delta ? kernel.eval(a + b) : 0.0); };

  // Scale of the nearest feature of b -> w(a + b): a itself or the support end.
  const double s = std::min(a, delta - a);
  double b0 = s * 0.008;
  // Keep the kink of w(a + b) at the cutoff plateau edge out of the inner panel.
  if (kernel.cutoff() > a) b0 = std::min(b0, 0.5 * (kernel.cutoff() - a));
  std::vector<double> pts{b0, delta - a, a};
  for (double t = s * 0.04; t < delta; t *= 5.0) pts.push_back(t);
  for (double r : kernel_features(kernel)) {
    pts.push_back(r);
    pts.push_back(r - a);
  }
  if (kernel.cutoff() > 0.0)
    for (double t = kernel.cutoff() * 5.0; t < delta; t *= 5.0) pts.push_back(t);
  const auto breaks = clean_breaks(std::move(pts), b0, delta);

  auto eval = [&](int sub) {
    // The inner panel resolves the kernel singularity exactly.
    const RadialRule rule = make_radial_rule(kernel, sub * delta / b0, 1, b0 / delta);
    double total = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = rule.weights[i] * inner(delta * rule.nodes[i]) * kernel.integral_scale();
      total += v;
      magnitude += std::abs(v);
    }
    auto [rest, mag] = composite([&](double b) { return kernel.eval(b) * inner(b); }, breaks, sub);
    return std::pair{total + rest, magnitude + mag};
  };
  return 2.0 * a * a * refine(eval, tolerance, "rho quadrature", kernel.singular() ? 0.0 : product_floor(kernel));
}

double rho_k_part(const KernelSpec& kernel, double a, double tolerance) {
  require_one_dimensional(kernel);
  if (kernel.singular()) throw NonIntegrable("k and h parts need an integrable kernel");
  if (!(a > 0.0 && a < kernel.horizon())) return 0.0;
  return a * a * kernel.eval(a) * first_moment_part(kernel, 0, tolerance);
}

double rho_h_part(const KernelSpec& kernel, double a, double tolerance) {
  require_one_dimensional(kernel);
  if (kernel.singular()) throw NonIntegrable("k and h parts need an integrable kernel");
  const double delta = kernel.horizon();
  if (!(a > 0.0 && a < delta)) return 0.0;
  std::vector<double> pts = graded_toward_left(0.0, delta - a, 0.25, 6);
  for (double r : kernel_features(kernel)) {
    pts.push_back(r);
    pts.push_back(r - a);
  }
  const auto breaks = clean_breaks(std::move(pts), 0.0, delta - a);
  const double integral = refine(
      [&](int sub) { return composite([&](double z) { return kernel.eval(z + a) * kernel.eval(z); }, breaks, sub); },
      tolerance, "h quadrature", product_floor(kernel));
  return -2.0 * a * a * integral;
}

double rho_via_gradient(const KernelSpec& kernel, double a, double tolerance) {
  require_one_dimensional(kernel);
  const double delta = kernel.horizon();
  if (!(a > 0.0 && a < delta)) return 0.0;
  QuadratureOptions q;
  q.tolerance = tolerance;
  q.max_level = 10;
  const double wa = kernel.eval(a);
  const double near =
      integrate_interval(kernel, 0.0, delta - a, [&](double b) { return kernel.eval(a + b) - wa; }, 1, q);
  const double far = integrate_interval(kernel, delta - a, delta, [&](double) { return -wa; }, 0, q);
  return -a * a * 2.0 * (near + far);
}

double rho_weighted_integral(const KernelSpec& kernel, const std::function<double(double)>& g, double tolerance) {
  require_one_dimensional(kernel);
  const double inner_tol = std::min(1e-13, tolerance * 1e-2);
  return 2.0 * integrate_over_horizon(
                   kernel, [&](double a) { return rho_at(kernel, a, inner_tol) * g(a); }, tolerance,
                   "weighted rho integral");
}

double rho_mass(const KernelSpec& kernel, double tolerance) {
  return rho_weighted_integral(kernel, [](double) { return 1.0; }, tolerance);
}

double RhoKernel::value(double a) const {
  a = std::abs(a);
  if (mesh.empty() || a >= delta) return 0.0;
  if (a <= mesh.front()) return rho.front() * a / mesh.front();
  if (a >= mesh.back()) return rho.back();
  const auto it = std::upper_bound(mesh.begin(), mesh.end(), a);
  const std::size_t j = static_cast<std::size_t>(it - mesh.begin());
  const double t = (a - mesh[j - 1]) / (mesh[j] - mesh[j - 1]);
  return (1.0 - t) * rho[j - 1] + t * rho[j];
}

namespace {

RhoKernel tabulate(const KernelSpec& kernel, const RhoOptions& options, bool parts) {
  RhoKernel out;
  out.delta = kernel.horizon();
  out.mesh = rho_mesh(out.delta, options.mesh_points);
  const std::size_t m = out.mesh.size();
  out.rho.assign(m, 0.0);
  if (parts) {
    out.k_part.assign(m, 0.0);
    out.h_part.assign(m, 0.0);
  }
  const double mass0 = parts ? first_moment_part(kernel, 0, options.tolerance) : 0.0;
  parallel_for(m, options.threads, [&](std::size_t i) {
    const double a = out.mesh[i];
    out.rho[i] = rho_at(kernel, a, options.tolerance);
    if (parts) {
      out.k_part[i] = a * a * kernel.eval(a) * mass0;
      out.h_part[i] = rho_h_part(kernel, a, options.tolerance);
    }
  });
  out.mass = rho_mass(kernel, std::max(options.tolerance, 1e-12));
  return out;
}

}  // namespace

RhoKernel rho_from_kernel(const KernelSpec& kernel, const RhoOptions& options) {
  require_one_dimensional(kernel);
  if (kernel.singular()) throw NonIntegrable("singular kernels need the epsilon-regularized construction");
  return tabulate(kernel, options, true);
}

RegularizedRho rho_regularized(const KernelSpec& kernel, std::vector<double> eps, const RhoOptions& options) {
  require_one_dimensional(kernel);
  if (!kernel.profile().non_increasing())
    throw InvalidArgument("epsilon regularization requires a non-increasing kernel");
  if (eps.size() < 2) throw InvalidArgument("epsilon regularization needs at least two cutoffs");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  RegularizedRho out;
  out.eps = eps;
  for (double e : eps) out.stages.push_back(tabulate(kernel.epsilon_cutoff(e), options, true));
  out.limit = tabulate(kernel, options, !kernel.singular());

  double peak = 0.0;
  for (double v : out.limit.rho) peak = std::max(peak, std::abs(v));
  auto worst = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    double w = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) w = std::max(w, lo[i] - hi[i]);
    return w / std::max(peak, 1e-300);
  };
  for (std::size_t k = 0; k + 1 < out.stages.size(); ++k)
    out.monotonicity_violation =
        std::max(out.monotonicity_violation, worst(out.stages[k].rho, out.stages[k + 1].rho));
  out.monotonicity_violation = std::max(out.monotonicity_violation, worst(out.stages.back().rho, out.limit.rho));

  // The mass deficit is first order in eps; eliminate it from the last two stages.
  const std::size_t n = eps.size();
  const double e1 = eps[n - 2], e2 = eps[n - 1];
  out.extrapolated_mass = (e1 * out.stages[n - 1].mass - e2 * out.stages[n - 2].mass) / (e1 - e2);
  return out;
}

HIdentity h_identity(const KernelSpec& kernel, double tolerance) {
  require_one_dimensional(kernel);
  if (kernel.singular()) throw NonIntegrable("the h identity needs an integrable kernel");
  HIdentity out;
  const double inner_tol = std::min(1e-13, tolerance * 1e-2);
  out.integral = 2.0 * integrate_over_horizon(
                           kernel, [&](double a) { return rho_h_part(kernel, a, inner_tol); }, tolerance, "h integral");
  const double m0 = first_moment_part(kernel, 0, tolerance);
  const double m1 = first_moment_part(kernel, 1, tolerance);
  const double m2 = first_moment_part(kernel, 2, tolerance);
  out.expected = m1 * m1 - m2 * m0;
  return out;
}

double rho_bond_symbol(const KernelSpec& kernel, double xi, double tolerance) {
  // (cos(xi a) - 1)/a^2 written without cancellation.
  auto g = [xi](double a) {
    const double s = std::sin(0.5 * xi * a);
    return -2.0 * s * s / (a * a);
  };
  return 2.0 * rho_weighted_integral(kernel, g, tolerance);
}

cplx one_sided_symbol(const KernelSpec& kernel, double xi, int sign) {
  require_one_dimensional(kernel);
  QuadratureOptions q;
  q.tolerance = 1e-13;
  q.max_level = 10;
  const CVec v = symbol(kernel, Orientation::axis(1, 0, sign >= 0 ? 1.0 : -1.0), RVec::Constant(1, xi), q);
  return v(0);
}

EnergyCheck energy_equivalence_check(const KernelSpec& kernel, const SpectralField& u, double tolerance) {
  require_one_dimensional(kernel);
  if (u.dim() != 1 || u.components() != 1) throw InvalidArgument("energy check needs a scalar one-dimensional field");
  EnergyCheck out;
  const Lattice& lat = u.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Mode m = lat.mode(i);
    if (m.is_zero()) continue;
    const double c2 = std::norm(u.coeffs(i)(0));
    if (c2 == 0.0) continue;
    const double xi = m.k[0];
    out.e_plus += std::norm(one_sided_symbol(kernel, xi, 1)) * c2;
    out.e_minus += std::norm(one_sided_symbol(kernel, xi, -1)) * c2;
  }
  out.e_plus *= 2.0 * std::numbers::pi;
  out.e_minus *= 2.0 * std::numbers::pi;

  // int_Omega |u(x + a) - u(x)|^2 dx by the trapezoid rule, exact for the
  // trigonometric polynomial u once the grid exceeds twice its degree.
  const int grid = 4 * u.bound() + 8;
  const double h = 2.0 * std::numbers::pi / grid;
  std::vector<cplx> base(grid);
  for (int j = 0; j < grid; ++j) base[j] = evaluate(u, RVec::Constant(1, -std::numbers::pi + j * h))(0);
  auto increment = [&](double a) {
    double total = 0.0;
    for (int j = 0; j < grid; ++j)
      total += std::norm(evaluate(u, RVec::Constant(1, -std::numbers::pi + j * h + a))(0) - base[j]);
    return total * h / (a * a);
  };
  out.e_rho = rho_weighted_integral(kernel, increment, tolerance);
  out.gap = std::abs(out.e_plus - out.e_rho) / std::max(out.e_plus, 1e-300);
  return out;
}

void write_rho_csv(const RhoKernel& rho, const std::filesystem::path& path) {
  const bool parts = !rho.k_part.empty();
  std::vector<std::string> cols{"a", "rho"};
  if (parts) {
    cols.emplace_back("k");
    cols.emplace_back("h");
  }
  ResultTable table(cols);
  for (std::size_t i = 0; i < rho.mesh.size(); ++i) {
    if (parts)
      table.add_row({rho.mesh[i], rho.rho[i], rho.k_part[i], rho.h_part[i]});
    else
      table.add_row({rho.mesh[i], rho.rho[i]});
  }
  table.write_csv(path);
}

}  // namespace nlgrad
