#include <cmath>
#include <limits>

#include <nlgrad/operators.hpp>
#include <nlgrad/solvers.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

double squared(const SpectralField& f) { return std::pow(norms(f).l2, 2); }

double gradient_energy(const SymbolTable& table, const SpectralField& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += table[i].squaredNorm() * u.coeffs(i).squaredNorm();
  return s;
}

}  // namespace

// Elastic energy two ways, Korn's lower bound and steady solves.
Outcome run_navier(const Config& config, const RunContext& context) {
  const int dim = config.dimension(3);
  const int bound = config.bound(8);
  const double delta = config.number("delta", 0.1);
  const int samples = config.integer("samples", 5);
  const double decay = config.number("decay", 2.0);
  const SymbolTable table = build_table(config.kernel().make(dim, delta), config.orientation(dim), bound,
                                        detail::symbol_options(config, context.threads));
  const SymbolTable local = SymbolTable::local(dim, bound);

  Outcome out;
  out.table = ResultTable({"mu", "lambda", "sample", "energy_gap", "korn_ratio", "korn_constant", "mode_korn_min",
                           "steady_residual"});
  double worst_gap = 0.0, worst_korn = std::numeric_limits<double>::infinity(), worst_res = 0.0;
  double min_commutator = std::numeric_limits<double>::infinity();
  for (const Lame& lame : config.lame_list()) {
    const NavierModeDecomposition dec = navier_decompose(table, lame);
    const double korn = std::min(lame.mu, lame.lambda + 2.0 * lame.mu);
    for (int s = 0; s < samples; ++s) {
      const SpectralField u = random_field(config.seed() + s, dim, bound, dim, decay);
      const double symbol_energy = navier_energy(dec, u);
      // lambda_L/2 |D^n u|^2 + mu |e^n(u)|^2 from the assembled fields.
      const double field_energy =
          0.5 * lame.lambda * squared(divergence(table, u)) + lame.mu * squared(strain(table, u));
      const double gap = std::abs(symbol_energy - field_energy) / std::abs(symbol_energy);
      const double ratio = 2.0 * symbol_energy / gradient_energy(table, u);
      double mode_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double g = table[i].squaredNorm() * u.coeffs(i).squaredNorm();
        if (g == 0.0) continue;
        const double e = (u.coeffs(i).adjoint() * dec.matrix(i) * u.coeffs(i))(0).real();
        mode_min = std::min(mode_min, e / g);
      }
      const SpectralField f = random_field(config.seed() + 300 + s, dim, bound, dim, decay);
      const double res = navier_residual(dec, navier_steady(dec, f), f);
      out.table.add_row({lame.mu, lame.lambda, double(s), gap, ratio, korn, mode_min, res});
      worst_gap = std::max(worst_gap, gap);
      worst_korn = std::min(worst_korn, mode_min - korn);
      worst_res = std::max(worst_res, res);
    }
    min_commutator = std::min(min_commutator, navier_commutator(dec, navier_decompose(local, lame)));
  }
  out.metrics["energy_gap"] = worst_gap;
  out.metrics["korn_margin"] = worst_korn;
  out.metrics["steady_residual"] = worst_res;
  out.metrics["commutator_with_local"] = min_commutator;
  out.check("energy_two_ways", worst_gap, "<=", config.tolerance("energy", 1e-10));
  out.check("korn_margin", worst_korn, ">=", -config.tolerance("korn_slack", 1e-10));
  out.check("steady_residual", worst_res, "<=", config.tolerance("residual", 1e-12));
  out.check("non_commuting_with_local", min_commutator, ">", config.tolerance("commutator_floor", 1e-8));
  return out;
}

// Wave-type Navier evolution: Hamiltonian conservation without forcing and
// trajectory errors against the local elastic wave equation.
Outcome run_navier_evolve(const Config& config, const RunContext& context) {
  const int dim = config.dimension(2);
  const int bound = config.bound(8);
  const auto deltas = config.deltas();
  const auto times = config.times();
  const double decay = config.number("decay", 3.0);
  const Lame lame = config.lame();
  const KernelConfig kc = config.kernel();
  const Orientation n = config.orientation(dim);
  const SymbolOptions opts = detail::symbol_options(config, context.threads);

  const SpectralField g = random_field(config.seed(), dim, bound, dim, decay);
  const SpectralField h = random_field(config.seed() + 1, dim, bound, dim, decay);
  const SpectralField force = random_field(config.seed() + 2, dim, bound, dim, decay);
  const Forcing forcing = [&](double t) { return std::cos(t) * force; };

  const NavierModeDecomposition local = navier_decompose(SymbolTable::local(dim, bound), lame);
  const Trajectory reference = navier_evolve(local, g, h, forcing, times);

  Outcome out;
  out.table = ResultTable({"delta", "l2_error", "hamiltonian_drift"});
  std::vector<double> errors;
  double drift = navier_hamiltonian_drift(local, navier_evolve(local, g, h, {}, times));
  for (double delta : deltas) {
    const NavierModeDecomposition dec = navier_decompose(build_table(kc.make(dim, delta), n, bound, opts), lame);
    const double d = navier_hamiltonian_drift(dec, navier_evolve(dec, g, h, {}, times));
    drift = std::max(drift, d);
    Trajectory traj = navier_evolve(dec, g, h, forcing, times);
    const double err = trajectory_l2_error(traj, reference);
    errors.push_back(err);
    out.table.add_row({delta, err, d});
    if (delta == deltas.back())
      out.extra_tables.emplace_back("trajectory", trajectory_table(traj, dec.table(), &reference, lame));
  }
  if (deltas.size() >= 3) out.metrics["slope"] = fit_slope(deltas, errors);
  out.metrics["hamiltonian_drift"] = drift;
  out.metrics["error_finest"] = errors.back();
  out.check("hamiltonian_drift", drift, "<=", config.tolerance("hamiltonian", 1e-10));
  out.check("error_monotone_in_delta", detail::strictly_decreasing(errors) ? 1.0 : 0.0, "==", 1.0);
  return out;
}

}  // namespace nlgrad::tools
