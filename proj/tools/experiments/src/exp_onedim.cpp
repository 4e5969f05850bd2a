#include <cmath>
#include <limits>
#include <numbers>

#include <nlgrad/onedim.hpp>
#include <nlgrad/operators.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

/// Closed-form rho of the first-moment sine kernel with delta = 1.
double sine_rho(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::abs(a);
  return pi * a * a * std::sin(pi * a) + 0.25 * pi * pi * a * a * ((a - 1.0) * std::cos(pi * a) - std::sin(pi * a) / pi);
}

SpectralField sine_field() {
  SpectralField u = SpectralField::scalar(1, 1);
  u.set(Mode{{1, 0, 0}, 1}, CVecX::Constant(1, cplx(0.0, -0.5)));
  return u;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Outcome rho_suite(const Config& config, const RunContext& context) {
  const double delta = config.number("delta", 1.0);
  RhoOptions ropts;
  ropts.mesh_points = config.integer("mesh_points", 2048);
  ropts.threads = context.threads;
  ropts.tolerance = config.tolerance("rho_quadrature", 1e-11);
  std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
  if (config.has("eps")) eps = config.numbers("eps");
  const auto kernels = config.kernels();
  const SpectralField u = sine_field();

  Outcome out;
  out.table = ResultTable({"kernel", "family", "beta", "mass", "min_rho", "energy_gap", "plus_minus_gap", "bond_gap",
                           "split_gap", "h_identity_gap", "closed_form_gap", "monotonicity_violation",
                           "regularized_mass", "extrapolated_mass"});
  constexpr double na = -1.0;
  for (std::size_t kc = 0; kc < kernels.size(); ++kc) {
    const KernelSpec kernel = kernels[kc].make(1, delta);
    const std::string tag = "k" + std::to_string(kc);
    RhoKernel rho;
    double monotone = na, reg_mass = na, extrap = na;
    const bool regularize = kernel.singular() || config.flag("regularize_all", false);
    if (regularize) {
      const RegularizedRho r = rho_regularized(kernel, eps, ropts);
      rho = r.limit;
      monotone = r.monotonicity_violation;
      reg_mass = r.stages.back().mass;
      extrap = r.extrapolated_mass;
      ResultTable stages({"eps", "mass"});
      for (std::size_t i = 0; i < r.eps.size(); ++i) stages.add_row({r.eps[i], r.stages[i].mass});
      out.extra_tables.emplace_back("stages_" + tag, std::move(stages));
      out.check(tag + "_regularized_monotone", monotone, "<=", config.tolerance("monotonicity", 1e-12));
      out.check(tag + "_extrapolated_mass_error", std::abs(extrap - 1.0), "<=", config.tolerance("mass_singular", 1e-6));
      if (!kernel.singular()) {
        // For kernels that are flat near 0 the cutoff changes nothing.
        const RhoKernel direct = rho_from_kernel(kernel, ropts);
        double diff = 0.0;
        for (std::size_t i = 0; i < direct.rho.size(); ++i)
          diff = std::max(diff, std::abs(direct.rho[i] - r.stages.front().rho[i]));
        out.metrics[tag + "_cutoff_identity_gap"] = diff / max_abs(direct.rho);
      }
    } else {
      rho = rho_from_kernel(kernel, ropts);
    }

    ResultTable tab(rho.k_part.empty() ? std::vector<std::string>{"a", "rho"}
                                       : std::vector<std::string>{"a", "rho", "k", "h"});
    for (std::size_t i = 0; i < rho.mesh.size(); ++i) {
      if (rho.k_part.empty())
        tab.add_row({rho.mesh[i], rho.rho[i]});
      else
        tab.add_row({rho.mesh[i], rho.rho[i], rho.k_part[i], rho.h_part[i]});
    }
    out.extra_tables.emplace_back("rho_" + tag, std::move(tab));

    const double peak = max_abs(rho.rho);
    double min_rho = std::numeric_limits<double>::infinity();
    for (double v : rho.rho) min_rho = std::min(min_rho, v);

    const EnergyCheck energy = energy_equivalence_check(kernel, u, config.tolerance("energy_quadrature", 1e-11));
    const double pm_gap = std::abs(energy.e_plus - energy.e_minus) / energy.e_plus;

    double bond_gap = 0.0;
    for (double xi : {1.0, 2.0, 5.0, 10.0, 20.0}) {
      const double expected = -std::norm(one_sided_symbol(kernel, xi));
      bond_gap = std::max(bond_gap, std::abs(rho_bond_symbol(kernel, xi) - expected) / std::abs(expected));
    }

    double split_gap = na, h_gap = na;
    if (!rho.k_part.empty()) {
      split_gap = 0.0;
      for (std::size_t i = 0; i < rho.rho.size(); ++i)
        split_gap = std::max(split_gap, std::abs(rho.k_part[i] + rho.h_part[i] - rho.rho[i]));
      split_gap /= peak;
      const HIdentity h = h_identity(kernel);
      h_gap = std::abs(h.integral - h.expected);
      out.check(tag + "_split_k_plus_h", split_gap, "<=", config.tolerance("split", 1e-10));
      out.check(tag + "_h_identity", h_gap, "<=", config.tolerance("h_identity", 1e-8));
    }

    double cf_gap = na;
    if (kernel.family() == KernelFamily::SineExample && delta == 1.0 &&
        kernel.normalization_kind() == Normalization::FirstMoment) {
      cf_gap = 0.0;
      for (std::size_t i = 0; i < rho.mesh.size(); ++i)
        cf_gap = std::max(cf_gap, std::abs(rho.rho[i] - sine_rho(rho.mesh[i])));
      const double at01 = rho_at(kernel, 0.1);
      out.metrics[tag + "_rho_0.1"] = at01;
      out.metrics[tag + "_rho_0.5"] = rho_at(kernel, 0.5);
      out.check(tag + "_closed_form", cf_gap, "<=", config.tolerance("closed_form", 1e-8));
      out.check(tag + "_sign_change_rho_0.1", at01, "<", 0.0);
    }

    const double mass_tol =
        kernel.singular() ? config.tolerance("mass_singular", 1e-6) : config.tolerance("mass", 1e-8);
    out.check(tag + "_mass_error", std::abs(rho.mass - 1.0), "<=", mass_tol);
    out.check(tag + "_energy_gap", energy.gap, "<=", config.tolerance("energy_gap", 1e-6));
    out.check(tag + "_plus_minus_gap", pm_gap, "<=", config.tolerance("plus_minus", 1e-10));
    out.check(tag + "_bond_symbol_gap", bond_gap, "<=", config.tolerance("bond_gap", 1e-6));
    if (kernel.profile().non_increasing())
      out.check(tag + "_nonnegative", min_rho / peak, ">=", -config.tolerance("nonnegativity", 1e-14));

    out.metrics[tag + "_mass"] = rho.mass;
    out.metrics[tag + "_energy_gap"] = energy.gap;
    out.table.add_row({double(kc), detail::family_code(kernel.family()), kernel.profile().beta(), rho.mass, min_rho,
                       energy.gap, pm_gap, bond_gap, split_gap, h_gap, cf_gap, monotone, reg_mass, extrap});
  }
  return out;
}

Outcome doubly_suite(const Config& config) {
  const std::vector<double> flat = config.has("pairs") ? config.numbers("pairs") : std::vector<double>{0.2, 0.05, 0.1, 0.1};
  if (flat.size() % 2 != 0 || flat.empty()) throw ConfigError("'pairs' must list delta, eps alternately");
  const double xi_max = config.number("xi_max", 64.0);
  const double xi_step = config.number("xi_step", 0.5);
  if (!(xi_step > 0.0)) throw ConfigError("'xi_step' must be positive");
  KernelConfig gamma_cfg = config.kernel("gamma");
  if (!config.has("gamma")) gamma_cfg.normalization = Normalization::SecondMoment;
  KernelConfig eta_cfg = config.kernel("eta");
  if (!config.has("eta")) eta_cfg.normalization = Normalization::UnitMass;

  Outcome out;
  out.table = ResultTable({"delta", "eps", "xi", "double", "product", "relative_gap"});
  double worst = 0.0;
  for (std::size_t p = 0; p < flat.size(); p += 2) {
    const KernelSpec gamma = gamma_cfg.make(1, flat[p]);
    const KernelSpec eta = eta_cfg.make(1, flat[p + 1]);
    const int steps = static_cast<int>(std::floor(xi_max / xi_step + 1e-9));
    for (int s = 1; s <= steps; ++s) {
      const double xi = s * xi_step;
      const double dbl = double_laplacian_symbol(gamma, eta, xi);
      const double prod = bond_symbol(gamma, xi) * averaging_symbol(eta, xi);
      const double gap = std::abs(dbl - prod) / std::abs(prod);
      worst = std::max(worst, gap);
      out.table.add_row({flat[p], flat[p + 1], xi, dbl, prod, gap});
    }
  }
  out.metrics["max_relative_gap"] = worst;
  out.check("factorization", worst, "<=", config.tolerance("factorization", 1e-12));
  return out;
}

}  // namespace

Outcome run_energy_1d(const Config& config, const RunContext& context) {
  const std::string suite = config.text("suite", "rho");
  if (suite == "rho") return rho_suite(config, context);
  if (suite == "doubly") return doubly_suite(config);
  throw ConfigError("energy-1d 'suite' must be 'rho' or 'doubly'");
}

}  // namespace nlgrad::tools
