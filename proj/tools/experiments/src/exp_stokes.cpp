#include <cmath>
#include <limits>

#include <nlgrad/operators.hpp>
#include <nlgrad/solvers.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

/// Appends constant slope columns to a convergence table.
ResultTable with_slopes(const ResultTable& base, const std::vector<std::string>& error_columns,
                        std::vector<double>& slopes) {
  std::vector<std::string> cols = base.columns();
  const auto deltas = base.column("delta");
  slopes.clear();
  for (const auto& c : error_columns) {
    cols.push_back("slope_" + c.substr(c.find('_') + 1));
    slopes.push_back(fit_slope(deltas, base.column(c)));
  }
  ResultTable out(cols);
  for (auto row : base.rows()) {
    row.insert(row.end(), slopes.begin(), slopes.end());
    out.add_row(std::move(row));
  }
  return out;
}

}  // namespace

// delta -> 0 rates of the steady Stokes or Navier solutions against the
// local problem, with least-squares log-log slopes.
Outcome run_convergence(const Config& config, const RunContext& context) {
  const std::string problem = config.text("problem", "stokes");
  const int dim = config.dimension(2);
  const int bound = config.bound(8);
  const auto deltas = config.deltas();
  if (deltas.size() < 3) throw ConfigError("convergence needs at least three deltas");
  const KernelSpec kernel = config.kernel().make(dim, deltas.front());
  const Orientation n = config.orientation(dim);
  const SymbolOptions opts = detail::symbol_options(config, context.threads);
  const SpectralField f = random_field(config.seed(), dim, bound, dim, config.number("decay", 3.0));

  Outcome out;
  std::vector<std::string> asserted;
  ResultTable base;
  if (problem == "stokes") {
    base = stokes_convergence(kernel, n, f, deltas, opts);
    asserted = {"err_u", "err_p", "err_div"};
  } else if (problem == "navier") {
    base = navier_convergence(kernel, n, f, deltas, config.lame(), opts);
    asserted = {"err_v", "err_l2"};
  } else {
    throw ConfigError("'problem' must be 'stokes' or 'navier'");
  }
  std::vector<double> slopes;
  out.table = with_slopes(base, asserted, slopes);

  const double lo = config.tolerance("slope_min", 0.9), hi = config.tolerance("slope_max", 1.5);
  // For Navier the rate is asserted in the energy (V) norm; the L2 slope is reported.
  const std::size_t n_asserted = problem == "navier" ? 1 : asserted.size();
  double slope_min = std::numeric_limits<double>::infinity(), slope_max = 0.0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    out.metrics["slope_" + asserted[i].substr(4)] = slopes[i];
    if (i < n_asserted) {
      slope_min = std::min(slope_min, slopes[i]);
      slope_max = std::max(slope_max, slopes[i]);
    }
  }
  out.metrics["slope_min"] = slope_min;
  out.metrics["slope_max"] = slope_max;
  out.check("slope_min", slope_min, ">=", lo);
  out.check("slope_max", slope_max, "<=", hi);
  return out;
}

// Steady Stokes on random forcings: residual, stability, structure.
Outcome run_stokes(const Config& config, const RunContext& context) {
  const int dim = config.dimension(2);
  const int bound = config.bound(8);
  const double delta = config.number("delta", 0.1);
  const int samples = config.integer("samples", 10);
  const KernelSpec kernel = config.kernel().make(dim, delta);
  const SymbolTable table = build_table(kernel, config.orientation(dim), bound,
                                        detail::symbol_options(config, context.threads));
  const double decay = config.number("decay", 3.0);

  Outcome out;
  out.table = ResultTable({"sample", "residual", "stability_ratio", "divergence", "hermitian_defect",
                           "leray_idempotence"});
  double worst_res = 0.0, worst_ratio = 0.0, worst_div = 0.0, worst_herm = 0.0, worst_leray = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SpectralField f = random_field(config.seed() + s, dim, bound, dim, decay);
    const StokesSolution sol = stokes_steady(table, f);
    const double res = stokes_residual(table, sol, f);
    const double ratio = stokes_stability_ratio(table, sol, f);
    const double div = detail::max_mode(divergence(table, sol.velocity)) / detail::max_mode(f);
    const double herm = std::max(sol.velocity.hermitian_defect(), sol.pressure.hermitian_defect()) /
                        detail::max_mode(f);
    const SpectralField pu = leray_project(table, f);
    const double leray = detail::per_mode_residual(leray_project(table, pu), pu);
    out.table.add_row({double(s), res, ratio, div, herm, leray});
    worst_res = std::max(worst_res, res);
    worst_ratio = std::max(worst_ratio, ratio);
    worst_div = std::max(worst_div, div);
    worst_herm = std::max(worst_herm, herm);
    worst_leray = std::max(worst_leray, leray);
  }
  const double tol = config.tolerance("residual", 1e-12);
  out.metrics["residual"] = worst_res;
  out.metrics["stability_ratio"] = worst_ratio;
  out.check("solve_residual", worst_res, "<=", tol);
  out.check("divergence_free", worst_div, "<=", tol);
  out.check("realness", worst_herm, "<=", tol);
  out.check("leray_idempotent", worst_leray, "<=", tol);
  // |u|_S <= |f|_S* and |p| <= |f|_S* mode by mode.
  out.check("stability_ratio", worst_ratio, "<=", config.tolerance("stability_constant", 2.0) + tol);
  return out;
}

// Unsteady Stokes: energy decay without forcing, and trajectory errors
// against the local flow that shrink with delta.
Outcome run_stokes_evolve(const Config& config, const RunContext& context) {
  const int dim = config.dimension(2);
  const int bound = config.bound(8);
  const auto deltas = config.deltas();
  const auto times = config.times();
  const double decay = config.number("decay", 3.0);
  const KernelConfig kc = config.kernel();
  const Orientation n = config.orientation(dim);
  const SymbolOptions opts = detail::symbol_options(config, context.threads);

  const SpectralField u_init = random_field(config.seed(), dim, bound, dim, decay);
  const SpectralField force = random_field(config.seed() + 1, dim, bound, dim, decay);
  const Forcing forcing = [&](double t) { return std::cos(t) * force; };

  const SymbolTable local = SymbolTable::local(dim, bound);
  const Trajectory reference = stokes_evolve(local, leray_project(local, u_init), forcing, times);

  Outcome out;
  out.table = ResultTable({"delta", "l2_error", "unforced_decreasing", "unforced_final_l2"});
  std::vector<double> errors;
  int not_decreasing = 0;
  Trajectory finest;
  SymbolTable finest_table;
  for (double delta : deltas) {
    const SymbolTable table = build_table(kc.make(dim, delta), n, bound, opts);
    const SpectralField u0 = leray_project(table, u_init);
    const Trajectory free = stokes_evolve(table, u0, {}, times);
    std::vector<double> energy;
    for (const auto& s : free.states) energy.push_back(norms(s).l2);
    const bool decreasing = detail::strictly_decreasing(energy);
    not_decreasing += decreasing ? 0 : 1;
    Trajectory forced = stokes_evolve(table, u0, forcing, times);
    const double err = trajectory_l2_error(forced, reference);
    errors.push_back(err);
    out.table.add_row({delta, err, decreasing ? 1.0 : 0.0, energy.back()});
    finest = std::move(forced);
    finest_table = table;
  }
  out.extra_tables.emplace_back("trajectory", trajectory_table(finest, finest_table, &reference));
  if (deltas.size() >= 3) out.metrics["slope"] = fit_slope(deltas, errors);
  out.metrics["error_finest"] = errors.back();
  out.check("unforced_energy_not_decreasing_count", not_decreasing, "==", 0);
  out.check("error_monotone_in_delta", detail::strictly_decreasing(errors) ? 1.0 : 0.0, "==", 1.0);
  return out;
}

}  // namespace nlgrad::tools
