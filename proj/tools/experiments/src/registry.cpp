#include <map>

#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

namespace {

const std::map<std::string, Experiment>& registry() {
  static const std::map<std::string, Experiment> table{
      {"symbols", run_symbols},       {"stokes", run_stokes},
      {"stokes-evolve", run_stokes_evolve}, {"helmholtz", run_helmholtz},
      {"divcurl", run_divcurl},       {"navier", run_navier},
      {"navier-evolve", run_navier_evolve}, {"energy-1d", run_energy_1d},
      {"convergence", run_convergence}, {"oracle", run_oracle},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"symbols",       "stokes", "stokes-evolve", "helmholtz",   "divcurl",
                                              "navier",        "navier-evolve", "energy-1d", "convergence", "oracle"};
  return names;
}

Outcome run_experiment(const std::string& subcommand, const Config& config, const RunContext& context) {
  const auto it = registry().find(subcommand);
  if (it == registry().end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
  if (config.experiment() != subcommand)
    throw ConfigError("configuration is for '" + config.experiment() + "', not '" + subcommand + "'");
  return it->second(config, context);
}

}  // namespace nlgrad::tools
