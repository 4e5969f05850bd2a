#include <cstdio>
#include <limits>
#include <map>

#include <nlgrad/symbols.hpp>

#include "common.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

// Uniform symbol bounds: for every kernel, orientation and horizon the
// table must stay away from zero, obey |lambda|/|xi| <= sqrt(2) d, and its
// lattice minimum must not drift with delta.
Outcome run_symbols(const Config& config, const RunContext& context) {
  const int dim = config.dimension(2);
  const int bound = config.bound(32);
  const auto deltas = config.deltas();
  const auto kernels = config.kernels();
  const auto orientations = config.orientations(dim);
  const bool cache = config.flag("write_cache", false) && !context.artifact_dir.empty();
  const SymbolOptions opts = detail::symbol_options(config, context.threads);

  Outcome out;
  out.table = ResultTable({"kernel", "family", "beta", "delta", "orientation", "min_abs", "max_ratio", "upper_bound",
                           "argmin_norm2", "argmax_norm2"});
  double min_abs = std::numeric_limits<double>::infinity(), max_excess = -std::numeric_limits<double>::infinity();
  double max_ratio = 0.0, variation = 0.0;
  for (std::size_t kc = 0; kc < kernels.size(); ++kc) {
    for (std::size_t oc = 0; oc < orientations.size(); ++oc) {
      std::vector<double> minima;
      for (double delta : deltas) {
        const KernelSpec kernel = kernels[kc].make(dim, delta);
        const SymbolTable table = build_table(kernel, orientations[oc], bound, opts);
        const BoundsReport r = verify_bounds(table);
        out.table.add_row({double(kc), detail::family_code(kernel.family()), kernel.profile().beta(), delta,
                           double(oc), r.min_abs, r.max_ratio, r.upper_bound, double(r.argmin.norm2()),
                           double(r.argmax.norm2())});
        minima.push_back(r.min_abs);
        min_abs = std::min(min_abs, r.min_abs);
        max_ratio = std::max(max_ratio, r.max_ratio);
        max_excess = std::max(max_excess, r.max_ratio - r.upper_bound);
        if (cache) {
          std::filesystem::create_directories(context.artifact_dir);
          char buf[96];
          std::snprintf(buf, sizeof buf, "symbols_k%zu_o%zu_d%g.txt", kc, oc, delta);
          table.save(context.artifact_dir / buf);
        }
      }
      variation = std::max(variation, (detail::max_of(minima) - detail::min_of(minima)) / detail::max_of(minima));
    }
  }
  out.metrics["min_abs"] = min_abs;
  out.metrics["max_ratio"] = max_ratio;
  out.metrics["upper_bound"] = std::sqrt(2.0) * dim;
  out.metrics["min_variation"] = variation;
  out.check("min_abs_positive", min_abs, ">", 0.0);
  out.check("ratio_excess_over_sqrt2_d", max_excess, "<=", config.tolerance("ratio_slack", 1e-8));
  out.check("lattice_min_variation", variation, "<", config.tolerance("min_variation", 0.2));
  return out;
}

}  // namespace nlgrad::tools
