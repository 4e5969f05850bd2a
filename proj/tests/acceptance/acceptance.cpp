// Acceptance suite: one PASS/FAIL line per criterion.
//
// Each criterion runs the shipped preset(s) through the experiments library
// and then re-judges the reported check values against thresholds pinned
// here, so loosening a preset's tolerances cannot make a criterion pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "nlgrad_tools/config.hpp"
#include "nlgrad_tools/experiments.hpp"

namespace fs = std::filesystem;
using nlgrad::tools::Config;
using nlgrad::tools::Outcome;
using nlgrad::tools::RunContext;

namespace {

const fs::path kPresets = NLGRAD_PRESET_DIR;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    note("FAILED " + why);
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Config preset(const std::string& name) { return Config::from_file(kPresets / (name + ".json")); }

Outcome run(const std::string& name, int threads = 1) {
  Config config = preset(name);
  RunContext context;
  context.threads = threads;
  return nlgrad::tools::run_experiment(config.experiment(), config, context);
}

bool compare(double value, const std::string& relation, double limit) {
  if (relation == "<=") return value <= limit;
  if (relation == "<") return value < limit;
  if (relation == ">=") return value >= limit;
  if (relation == ">") return value > limit;
  if (relation == "==") return value == limit;
  return false;
}

/// Looks up a reported check by name and judges its value against the pinned limit.
void require(Verdict& v, const Outcome& out, const std::string& check, const std::string& relation, double limit) {
  for (const auto& c : out.checks) {
    if (c.name != check) continue;
    if (compare(c.value, relation, limit))
      v.note(check + "=" + fmt(c.value));
    else
      v.fail(check + "=" + fmt(c.value) + " not " + relation + " " + fmt(limit));
    return;
  }
  v.fail("missing check " + check);
}

void require_metric(Verdict& v, const Outcome& out, const std::string& metric, const std::string& relation,
                    double limit) {
  const auto it = out.metrics.find(metric);
  if (it == out.metrics.end()) return v.fail("missing metric " + metric);
  if (compare(it->second, relation, limit))
    v.note(metric + "=" + fmt(it->second));
  else
    v.fail(metric + "=" + fmt(it->second) + " not " + relation + " " + fmt(limit));
}

void require_all_passed(Verdict& v, const Outcome& out, const std::string& name) {
  if (!out.passed()) v.fail(name + " reported a failing check");
}

// ------------------------------------------------------------------ criteria

Verdict symbol_bounds() {
  Verdict v;
  const Outcome out = run("c01_symbol_bounds");
  require_all_passed(v, out, "c01");
  require(v, out, "min_abs_positive", ">", 0.0);
  require(v, out, "ratio_excess_over_sqrt2_d", "<=", 1e-8);
  require(v, out, "lattice_min_variation", "<", 0.2);
  return v;
}

Verdict stokes_convergence() {
  Verdict v;
  const Outcome out = run("c02_stokes_convergence");
  require_all_passed(v, out, "c02");
  require(v, out, "slope_min", ">=", 0.9);
  for (const char* e : {"slope_u", "slope_p", "slope_div"}) require_metric(v, out, e, ">=", 0.9);
  return v;
}

Verdict adjoint_and_oracle() {
  Verdict v;
  const Outcome out = run("c03_oracle_adjoint");
  require_all_passed(v, out, "c03");
  require(v, out, "adjoint_residual", "<=", 1e-12);
  require(v, out, "oracle_gap", "<=", 1e-4);
  if (preset("c03_oracle_adjoint").tolerance("oracle_quadrature", 1.0) > 1e-10)
    v.fail("oracle quadrature tolerance looser than 1e-10");
  return v;
}

Verdict helmholtz() {
  Verdict v;
  const Outcome out = run("c04_helmholtz");
  require_all_passed(v, out, "c04");
  for (const char* c : {"reconstruction", "gauge", "divergence_free", "curl_free"}) require(v, out, c, "<=", 1e-12);
  return v;
}

Verdict vector_identity() {
  Verdict v;
  const Outcome out = run("c05_vector_identity");
  require_all_passed(v, out, "c05");
  require(v, out, "vector_identity", "<=", 1e-12);
  require(v, out, "curl_of_gradient", "<=", 1e-12);
  return v;
}

Verdict rho_suite() {
  Verdict v;
  const Outcome out = run("c06_rho_suite");
  require_all_passed(v, out, "c06");
  // Kernel order in the preset: constant, sine, fractional beta = 1.
  require(v, out, "k0_mass_error", "<=", 1e-8);
  require(v, out, "k1_mass_error", "<=", 1e-8);
  require(v, out, "k2_mass_error", "<=", 1e-6);
  require(v, out, "k2_extrapolated_mass_error", "<=", 1e-6);
  require(v, out, "k2_regularized_monotone", "<=", 1e-12);
  require(v, out, "k1_closed_form", "<=", 1e-8);
  require(v, out, "k1_sign_change_rho_0.1", "<", 0.0);
  // Closed form at a = 0.1 evaluated independently: -0.0138386996573301.
  const auto it = out.metrics.find("k1_rho_0.1");
  if (it == out.metrics.end() || std::abs(it->second + 0.0138386996573301) > 1e-9)
    v.fail("rho(0.1) does not match -0.0138387");
  for (const char* k : {"k0_energy_gap", "k1_energy_gap", "k2_energy_gap"}) require(v, out, k, "<=", 1e-6);
  return v;
}

Verdict doubly_nonlocal() {
  Verdict v;
  const Outcome out = run("c07_doubly_nonlocal");
  require_all_passed(v, out, "c07");
  require(v, out, "factorization", "<=", 1e-12);
  return v;
}

Verdict korn() {
  Verdict v;
  const Outcome out = run("c08_navier_korn");
  require_all_passed(v, out, "c08");
  require(v, out, "energy_two_ways", "<=", 1e-10);
  require(v, out, "korn_margin", ">=", -1e-10);
  return v;
}

Verdict navier_convergence() {
  Verdict v;
  const Outcome out = run("c09_navier_convergence");
  require_all_passed(v, out, "c09");
  require(v, out, "slope_min", ">=", 0.9);
  return v;
}

Verdict evolution() {
  Verdict v;
  const Outcome stokes = run("c10a_stokes_evolve");
  require_all_passed(v, stokes, "c10a");
  require(v, stokes, "unforced_energy_not_decreasing_count", "==", 0.0);
  require(v, stokes, "error_monotone_in_delta", "==", 1.0);
  const Outcome navier = run("c10b_navier_evolve");
  require_all_passed(v, navier, "c10b");
  require(v, navier, "hamiltonian_drift", "<=", 1e-10);
  require(v, navier, "error_monotone_in_delta", "==", 1.0);
  return v;
}

Verdict friedrichs() {
  Verdict v;
  const Outcome out = run("c11_divcurl_friedrichs");
  require_all_passed(v, out, "c11");
  require(v, out, "consistency_residual", "<=", 1e-10);
  require(v, out, "friedrichs_variation", "<", 0.25);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs a preset into `dir` and returns the CSV files it wrote.
std::vector<fs::path> emit(const std::string& name, int threads, const fs::path& dir) {
  fs::create_directories(dir);
  Config config = preset(name);
  RunContext context;
  context.threads = threads;
  const Outcome out = nlgrad::tools::run_experiment(config.experiment(), config, context);
  nlgrad::tools::write_outputs(out, config, context, dir, 0.0);
  std::vector<fs::path> csv;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") csv.push_back(e.path().filename());
  return csv;
}

Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / ("nlgrad_determinism_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::size_t compared = 0;
  for (const char* name : {"c03_oracle_adjoint", "c06_rho_suite", "c10b_navier_evolve"}) {
    const fs::path a = root / name / "first", b = root / name / "second", c = root / name / "threads2";
    const auto files = emit(name, 1, a);
    emit(name, 1, b);
    emit(name, 2, c);
    if (files.empty()) v.fail(std::string(name) + " wrote no CSV");
    for (const auto& f : files) {
      const std::string ref = slurp(a / f);
      if (ref != slurp(b / f)) v.fail(f.string() + " differs between identical runs");
      if (ref != slurp(c / f)) v.fail(f.string() + " differs between 1 and 2 threads");
      ++compared;
    }
  }
  fs::remove_all(root);
  v.note(std::to_string(compared) + " CSV files byte-identical across 3 runs");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"symbol bounds", symbol_bounds},
      {"Stokes first-order convergence", stokes_convergence},
      {"adjointness and quadrature oracle", adjoint_and_oracle},
      {"Helmholtz exactness", helmholtz},
      {"vector identity and curl of gradient", vector_identity},
      {"rho suite", rho_suite},
      {"doubly nonlocal factorization", doubly_nonlocal},
      {"Korn and energy consistency", korn},
      {"Navier steady convergence", navier_convergence},
      {"evolution checks", evolution},
      {"Friedrichs and div-curl", friedrichs},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2zu  %-38s (%.1f s) %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
