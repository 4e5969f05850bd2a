#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlgrad/results.hpp>

#include "nlgrad_tools/config.hpp"

namespace nlgrad::tools {

/// One asserted property: value `relation` limit, relation one of
/// "<=", "<", ">=", ">", "==".
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;
  double limit = 0.0;
  bool pass = false;
};

struct Outcome {
  ResultTable table;
  /// Additional tables written next to the main CSV as <name>_<suffix>.csv.
  std::vector<std::pair<std::string, ResultTable>> extra_tables;
  std::vector<Check> checks;
  std::map<std::string, double> metrics;

  /// Records a check and returns whether it passed.
  bool check(const std::string& name, double value, const std::string& relation, double limit);
  bool passed() const;
};

struct RunContext {
  int threads = 1;
  /// Scratch directory for side artifacts such as symbol caches; empty for none.
  std::filesystem::path artifact_dir;
};

using Experiment = std::function<Outcome(const Config&, const RunContext&)>;

/// Subcommand names in a fixed order.
const std::vector<std::string>& subcommands();

/// Runs `subcommand` on the configuration. Throws ConfigError for
/// unknown subcommands or a mismatched "experiment" field.
Outcome run_experiment(const std::string& subcommand, const Config& config, const RunContext& context);

/// Summary document: checks, metrics, config hash, version, wall time.
nlohmann::json summary_json(const Outcome& outcome, const Config& config, const RunContext& context,
                            double wall_seconds);

/// Writes <dir>/<name>.csv, the extra tables and <dir>/<name>.summary.json.
/// Every file is written to a temporary sibling and renamed into place.
void write_outputs(const Outcome& outcome, const Config& config, const RunContext& context,
                   const std::filesystem::path& dir, double wall_seconds);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& content);

// Individual experiments (also reachable through run_experiment).
Outcome run_symbols(const Config& config, const RunContext& context);
Outcome run_convergence(const Config& config, const RunContext& context);
Outcome run_oracle(const Config& config, const RunContext& context);
Outcome run_stokes(const Config& config, const RunContext& context);
Outcome run_stokes_evolve(const Config& config, const RunContext& context);
Outcome run_helmholtz(const Config& config, const RunContext& context);
Outcome run_divcurl(const Config& config, const RunContext& context);
Outcome run_navier(const Config& config, const RunContext& context);
Outcome run_navier_evolve(const Config& config, const RunContext& context);
Outcome run_energy_1d(const Config& config, const RunContext& context);

}  // namespace nlgrad::tools
