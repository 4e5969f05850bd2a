#include <cmath>
#include <fstream>

#include <nlgrad/error.hpp>

#include "nlgrad_tools/experiments.hpp"

namespace nlgrad::tools {

bool Outcome::check(const std::string& name, double value, const std::string& relation, double limit) {
  bool pass = false;
  if (relation == "<=")
    pass = value <= limit;
  else if (relation == "<")
    pass = value < limit;
  else if (relation == ">=")
    pass = value >= limit;
  else if (relation == ">")
    pass = value > limit;
  else if (relation == "==")
    pass = value == limit;
  else
    throw InvalidArgument("unknown relation '" + relation + "'");
  checks.push_back({name, value, relation, limit, pass});
  return pass;
}

bool Outcome::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json summary_json(const Outcome& outcome, const Config& config, const RunContext& context,
                            double wall_seconds) {
  using nlohmann::json;
  json checks = json::array();
  for (const auto& c : outcome.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"limit", c.limit},
                      {"pass", c.pass}});
  json metrics = json::object();
  for (const auto& [k, v] : outcome.metrics) metrics[k] = v;
  json meta = json::object();
  for (const auto& [k, v] : outcome.table.metadata()) meta[k] = v;
  meta["config_hash"] = config.hash();
  meta["version"] = NLGRAD_VERSION;
  meta["wall_time_s"] = wall_seconds;
  meta["threads"] = context.threads;
  meta["seed"] = config.seed();
  return {{"experiment", config.experiment()},
          {"name", config.name()},
          {"passed", outcome.passed()},
          {"checks", checks},
          {"metrics", metrics},
          {"csv", config.name() + ".csv"},
          {"rows", outcome.table.row_count()},
          {"metadata", meta},
          {"config", config.raw()}};
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_outputs(const Outcome& outcome, const Config& config, const RunContext& context,
                   const std::filesystem::path& dir, double wall_seconds) {
  std::filesystem::create_directories(dir);
  const std::string stem = config.name();
  write_atomically(dir / (stem + ".csv"), outcome.table.to_csv());
  for (const auto& [suffix, table] : outcome.extra_tables)
    write_atomically(dir / (stem + "_" + suffix + ".csv"), table.to_csv());
  write_atomically(dir / (stem + ".summary.json"), summary_json(outcome, config, context, wall_seconds).dump(2) + "\n");
}

}  // namespace nlgrad::tools
