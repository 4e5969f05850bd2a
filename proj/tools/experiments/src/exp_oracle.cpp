#include <cmath>

#include <nlgrad/operators.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

struct TestFunction {
  const char* name;
  int components;
  PointFunction f;
};

std::vector<TestFunction> scalar_functions() {
  return {
      {"sin(x1)", 1, [](const RVec& x) { return CVecX::Constant(1, std::sin(x(0))); }},
      {"sin(x1+2x2)", 1, [](const RVec& x) { return CVecX::Constant(1, std::sin(x(0) + 2.0 * x(1))); }},
  };
}

TestFunction vector_function() {
  return {"(sin(x1+x2),cos(2x1))", 2, [](const RVec& x) {
            CVecX v(2);
            v << std::sin(x(0) + x(1)), std::cos(2.0 * x(0));
            return v;
          }};
}

double relative_gap(const GridSamples& a, const GridSamples& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

// Symbol-level adjointness of G and D, and spectral operators against the
// direct half-ball quadrature of their defining integrals.
Outcome run_oracle(const Config& config, const RunContext& context) {
  const int dim = 2;
  const int bound = config.bound(8);
  const double delta = config.number("delta", 0.5);
  const int pairs = config.integer("pairs", 50);
  const int grid = config.integer("grid", 12);
  if (grid < 2 * 2 + 1) throw ConfigError("'grid' must be at least 5");
  const Orientation n = config.orientation(dim);
  const SymbolOptions sopts = detail::symbol_options(config, context.threads);
  QuadratureOptions qopts;
  qopts.tolerance = config.tolerance("oracle_quadrature", 1e-10);
  qopts.max_level = 8;

  Outcome out;
  out.table = ResultTable({"kernel", "test", "value"});
  double worst_adjoint = 0.0, worst_gap = 0.0;
  const auto kernels = config.has("kernels") ? config.kernels() : std::vector<KernelConfig>{config.kernel()};
  for (std::size_t kc = 0; kc < kernels.size(); ++kc) {
    const KernelSpec kernel = kernels[kc].make(dim, delta);
    const SymbolTable table = build_table(kernel, n, bound, sopts);

    for (int p = 0; p < pairs; ++p) {
      const SpectralField v = random_field(config.seed() + p, dim, bound, 1, 1.0);
      const SpectralField u = random_field(config.seed() + 10000 + p, dim, bound, dim, 1.0);
      const SpectralField gv = gradient(table, v);
      const cplx lhs = inner(gv, u);
      const cplx rhs = -inner(v, divergence(table, u));
      const double res = std::abs(lhs - rhs) / (norms(gv).l2 * norms(u).l2);
      worst_adjoint = std::max(worst_adjoint, res);
    }
    out.table.add_row({double(kc), 0.0, worst_adjoint});

    // The test functions are trigonometric of degree <= 2.
    const int fb = 2;
    int test = 1;
    for (const auto& tf : scalar_functions()) {
      const SpectralField uh = forward_transform(sample(dim, grid, 1, tf.f), fb).field;
      const SymbolTable small = build_table(kernel, n, fb, sopts);
      const GridSamples spectral = inverse_transform(gradient(small, uh), grid);
      const GridSamples direct = gradient_oracle_grid(kernel, n, tf.f, 1, grid, qopts, context.threads);
      const double gap = relative_gap(spectral, direct);
      worst_gap = std::max(worst_gap, gap);
      out.table.add_row({double(kc), double(test++), gap});
    }
    {
      const TestFunction tf = vector_function();
      const SpectralField vh = forward_transform(sample(dim, grid, 2, tf.f), fb).field;
      const SymbolTable small = build_table(kernel, n, fb, sopts);
      const GridSamples spectral = inverse_transform(divergence(small, vh), grid);
      const GridSamples direct = divergence_oracle_grid(kernel, n, tf.f, grid, qopts, context.threads);
      const double gap = relative_gap(spectral, direct);
      worst_gap = std::max(worst_gap, gap);
      out.table.add_row({double(kc), double(test++), gap});
    }
  }
  out.metrics["adjoint_residual"] = worst_adjoint;
  out.metrics["oracle_gap"] = worst_gap;
  out.check("adjoint_residual", worst_adjoint, "<=", config.tolerance("adjoint", 1e-12));
  out.check("oracle_gap", worst_gap, "<=", config.tolerance("oracle_gap", 1e-4));
  return out;
}

}  // namespace nlgrad::tools
