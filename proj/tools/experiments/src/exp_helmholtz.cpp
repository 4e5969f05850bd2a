#include <cmath>

#include <nlgrad/error.hpp>
#include <nlgrad/operators.hpp>
#include <nlgrad/solvers.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

SymbolTable table_for(const Config& config, const RunContext& context, int dim, int bound, double delta) {
  return build_table(config.kernel().make(dim, delta), config.orientation(dim), bound,
                     detail::symbol_options(config, context.threads));
}

/// Helmholtz decompositions in 2D and 3D on random fields.
Outcome decomposition_suite(const Config& config, const RunContext& context) {
  const double delta = config.number("delta", 0.1);
  const int samples = config.integer("samples", 5);
  const double decay = config.number("decay", 2.0);
  const int bound2 = config.integer("bound_2d", 16), bound3 = config.integer("bound_3d", 8);
  if (bound2 < 2 || bound3 < 2) throw ConfigError("bounds must be at least 2");

  // A 2D config orientation angle does not apply in 3D; 3D uses "orientation_3d".
  const SymbolTable t2 = build_table(config.kernel().make(2, delta), config.orientation(2), bound2,
                                     detail::symbol_options(config, context.threads));
  RVec n3(3);
  n3 << 1.0, 2.0, 3.0;
  if (config.has("orientation_3d")) {
    const auto v = config.numbers("orientation_3d");
    if (v.size() != 3) throw ConfigError("'orientation_3d' needs three entries");
    n3 << v[0], v[1], v[2];
  }
  const SymbolTable t3 = build_table(config.kernel().make(3, delta), Orientation::normalized(n3), bound3,
                                     detail::symbol_options(config, context.threads));

  Outcome out;
  out.table = ResultTable({"dimension", "sample", "reconstruction", "gauge", "divergence_free", "curl_free"});
  double worst_rec = 0.0, worst_gauge = 0.0, worst_div = 0.0, worst_curl = 0.0;
  for (int s = 0; s < samples; ++s) {
    {
      const SpectralField u = random_field(config.seed() + s, 2, bound2, 2, decay);
      const Helmholtz2D h = helmholtz2d(t2, u);
      const double rec = detail::per_mode_residual(helmholtz2d_reconstruct(t2, h), u);
      // The rotated part J G^{-n} q is divergence free for D^n.
      Helmholtz2D rotated{SpectralField::scalar(2, bound2), h.q};
      const double div = detail::max_mode(divergence(t2, helmholtz2d_reconstruct(t2, rotated))) / detail::max_mode(u);
      out.table.add_row({2.0, double(s), rec, 0.0, div, 0.0});
      worst_rec = std::max(worst_rec, rec);
      worst_div = std::max(worst_div, div);
    }
    {
      const SpectralField u = random_field(config.seed() + 1000 + s, 3, bound3, 3, decay);
      const Helmholtz3D h = helmholtz3d(t3, u);
      const double rec = detail::per_mode_residual(helmholtz3d_reconstruct(t3, h), u);
      const SymbolTable r3 = t3.reflected();
      const double scale = detail::max_mode(u);
      const double gauge = detail::max_mode(divergence(r3, h.v)) / scale;
      const double div = detail::max_mode(divergence(t3, curl3d(t3, h.v, -1))) / scale;
      const double curl = detail::max_mode(curl3d(t3, gradient(t3, h.p), +1)) / scale;
      out.table.add_row({3.0, double(s), rec, gauge, div, curl});
      worst_rec = std::max(worst_rec, rec);
      worst_gauge = std::max(worst_gauge, gauge);
      worst_div = std::max(worst_div, div);
      worst_curl = std::max(worst_curl, curl);
    }
  }
  const double tol = config.tolerance("residual", 1e-12);
  out.metrics["reconstruction"] = worst_rec;
  out.metrics["gauge"] = worst_gauge;
  out.metrics["divergence_free"] = worst_div;
  out.check("reconstruction", worst_rec, "<=", tol);
  out.check("gauge", worst_gauge, "<=", tol);
  out.check("divergence_free", worst_div, "<=", tol);
  out.check("curl_free", worst_curl, "<=", tol);
  return out;
}

/// Curl-curl vector identity, curl of gradient and strain trace in 3D.
Outcome identity_suite(const Config& config, const RunContext& context) {
  const int bound = config.bound(8);
  const double delta = config.number("delta", 0.1);
  const int samples = config.integer("samples", 5);
  const double decay = config.number("decay", 2.0);
  const SymbolTable table = table_for(config, context, 3, bound, delta);
  const SymbolTable reflected = table.reflected();

  Outcome out;
  out.table = ResultTable({"sample", "vector_identity", "curl_of_gradient", "strain_trace"});
  double worst_vec = 0.0, worst_cg = 0.0, worst_tr = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SpectralField f = random_field(config.seed() + s, 3, bound, 3, decay);
    const SpectralField p = random_field(config.seed() + 500 + s, 3, bound, 1, decay);
    // C^{-n} C^n f = G^n D^n f - L^n f.
    const SpectralField lhs = curl3d(table, curl3d(table, f, +1), -1);
    const SpectralField rhs = gradient(table, divergence(table, f)) - diffusion(table, f);
    const double vec = detail::per_mode_residual(lhs, rhs);
    const SpectralField gp = gradient(table, p);
    const double cg = detail::max_mode(curl3d(table, gp, +1)) / detail::max_mode(gp);
    // Tr e^{-n}(f) = D^n f.
    const SpectralField e = strain(reflected, f);
    SpectralField trace = SpectralField::scalar(3, bound);
    for (std::size_t i = 0; i < trace.size(); ++i) trace.coeffs(i)(0) = e.coeffs(i)(0) + e.coeffs(i)(4) + e.coeffs(i)(8);
    const double tr = detail::per_mode_residual(trace, divergence(table, f));
    out.table.add_row({double(s), vec, cg, tr});
    worst_vec = std::max(worst_vec, vec);
    worst_cg = std::max(worst_cg, cg);
    worst_tr = std::max(worst_tr, tr);
  }
  const double tol = config.tolerance("residual", 1e-12);
  out.metrics["vector_identity"] = worst_vec;
  out.metrics["curl_of_gradient"] = worst_cg;
  out.metrics["strain_trace"] = worst_tr;
  out.check("vector_identity", worst_vec, "<=", tol);
  out.check("curl_of_gradient", worst_cg, "<=", tol);
  out.check("strain_trace", worst_tr, "<=", tol);
  return out;
}

}  // namespace

Outcome run_helmholtz(const Config& config, const RunContext& context) {
  const std::string suite = config.text("suite", "decomposition");
  if (suite == "decomposition") return decomposition_suite(config, context);
  if (suite == "identities") return identity_suite(config, context);
  throw ConfigError("helmholtz 'suite' must be 'decomposition' or 'identities'");
}

// Div-curl system on compatible data and the Friedrichs ratio across delta.
Outcome run_divcurl(const Config& config, const RunContext& context) {
  const int bound = config.bound(8);
  const auto deltas = config.deltas();
  const int samples = config.integer("samples", 5);
  const double decay = config.number("decay", 2.0);

  Outcome out;
  out.table = ResultTable({"delta", "max_residual", "friedrichs_ratio", "incompatible_rejected"});
  const SpectralField probe = random_field(config.seed() + 777, 3, bound, 3, decay);
  std::vector<double> ratios;
  double worst = 0.0;
  bool all_rejected = true;
  for (double delta : deltas) {
    const SymbolTable table = table_for(config, context, 3, bound, delta);
    double res = 0.0;
    for (int s = 0; s < samples; ++s) {
      const SpectralField f = random_field(config.seed() + s, 3, bound, 1, decay);
      const SpectralField v = random_field(config.seed() + 100 + s, 3, bound, 3, decay);
      // g = C^n v satisfies the compatibility condition exactly.
      res = std::max(res, divcurl3d(table, f, curl3d(table, v, +1)).residual);
    }
    bool rejected = false;
    try {
      divcurl3d(table, random_field(config.seed(), 3, bound, 1, decay), probe);
    } catch (const IncompatibleData&) {
      rejected = true;
    }
    all_rejected = all_rejected && rejected;
    const double ratio = friedrichs_ratio(table, probe);
    ratios.push_back(ratio);
    worst = std::max(worst, res);
    out.table.add_row({delta, res, ratio, rejected ? 1.0 : 0.0});
  }
  const double variation = (detail::max_of(ratios) - detail::min_of(ratios)) / detail::min_of(ratios);
  out.metrics["max_residual"] = worst;
  out.metrics["friedrichs_variation"] = variation;
  out.check("consistency_residual", worst, "<=", config.tolerance("residual", 1e-10));
  out.check("friedrichs_variation", variation, "<", config.tolerance("friedrichs_variation", 0.25));
  out.check("incompatible_rejected", all_rejected ? 1.0 : 0.0, "==", 1.0);
  return out;
}

}  // namespace nlgrad::tools
