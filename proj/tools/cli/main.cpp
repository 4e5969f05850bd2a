// nlgrad: batch driver for the nonlocal-operator experiments.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
// 3 quadrature did not converge, 4 any other failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nlgrad/error.hpp>

#include "nlgrad_tools/experiments.hpp"

namespace {

using nlgrad::tools::Config;
using nlgrad::tools::ConfigError;

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitQuadrature = 3;
constexpr int kExitOther = 4;

void apply_tolerance_override(Config& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--tol-override expects KEY=VALUE, got '" + spec + "'");
  const std::string key = spec.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(spec.substr(eq + 1), &used);
    if (used != spec.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigError("--tol-override value for '" + key + "' is not a number");
  }
  config.override_tolerance(key, value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral experiments for half-ball nonlocal operators on periodic domains"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  long long seed = -1;
  std::vector<std::string> tol_overrides;
  app.add_option("--config", config_path, "JSON experiment configuration")->envname("NLGRAD_CONFIG");
  app.add_option("--out", out_dir, "Output directory (default: the config's output_dir or ./out)")
      ->envname("NLGRAD_OUT");
  app.add_option("--threads", threads, "Worker threads (0: all cores)")
      ->envname("NLGRAD_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Override the configuration seed")->envname("NLGRAD_SEED")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-override", tol_overrides, "Override a tolerance, KEY=VALUE (repeatable)")
      ->envname("NLGRAD_TOL_OVERRIDE")
      ->delimiter(',');

  for (const auto& name : nlgrad::tools::subcommands()) app.add_subcommand(name, "Run the '" + name + "' experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    if (config_path.empty()) throw ConfigError("--config is required");
    Config config = Config::from_file(config_path);
    if (seed >= 0) config.override_seed(static_cast<std::uint64_t>(seed));
    for (const auto& spec : tol_overrides) apply_tolerance_override(config, spec);
    if (out_dir.empty()) out_dir = config.text("output_dir", "out");

    nlgrad::tools::RunContext context;
    context.threads = threads;
    context.artifact_dir = std::filesystem::path(out_dir) / (config.name() + "_artifacts");

    // The output directory is created only once the experiment has run, so
    // configuration errors leave nothing behind.
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = nlgrad::tools::run_experiment(subcommand, config, context);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) throw ConfigError("output directory '" + out_dir + "' is not writable");
    nlgrad::tools::write_outputs(outcome, config, context, out_dir, wall);

    for (const auto& c : outcome.checks)
      std::printf("%s %-40s %.6g %s %.6g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                  c.limit);
    std::printf("%s: %s (%.2f s) -> %s\n", config.name().c_str(), outcome.passed() ? "passed" : "FAILED", wall,
                out_dir.c_str());
    return outcome.passed() ? 0 : kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const nlgrad::QuadratureError& e) {
    std::fprintf(stderr, "quadrature error: %s\n", e.what());
    return kExitQuadrature;
  } catch (const nlgrad::InvalidArgument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
}
