#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <nlgrad/fields.hpp>
#include <nlgrad/kernels.hpp>
#include <nlgrad/orientation.hpp>

namespace nlgrad::tools {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel entry of a configuration:
///   {"family": "fractional", "beta": 1.5, "normalization": "first_moment"}
struct KernelConfig {
  KernelProfile profile;
  Normalization normalization = Normalization::FirstMoment;

  KernelSpec make(int dimension, double horizon) const;
  std::string label() const;
};

/// Validated view of a JSON experiment configuration. Accessors throw
/// ConfigError with the offending key in the message.
class Config {
 public:
  explicit Config(nlohmann::json raw);
  static Config from_file(const std::filesystem::path& path);

  const nlohmann::json& raw() const { return raw_; }

  std::string experiment() const;
  /// Output stem; defaults to the experiment name.
  std::string name() const;

  bool has(const std::string& key) const { return raw_.contains(key); }
  int integer(const std::string& key, std::optional<int> fallback = {}) const;
  double number(const std::string& key, std::optional<double> fallback = {}) const;
  std::string text(const std::string& key, std::optional<std::string> fallback = {}) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  /// "bound" (N >= 2).
  int bound(int fallback) const;
  int dimension(int fallback) const;
  std::uint64_t seed() const;
  /// "deltas": strictly decreasing positive list.
  std::vector<double> deltas() const;
  /// "kernel" (single) or "kernels" (list).
  KernelConfig kernel(const std::string& key = "kernel") const;
  std::vector<KernelConfig> kernels() const;
  /// "orientation": {"angle": t} (2D), {"vector": [...]}, or absent (e_1).
  Orientation orientation(int dimension) const;
  /// "orientations": {"angles": m} (m equispaced angles in 2D) or a list of vectors.
  std::vector<Orientation> orientations(int dimension) const;
  std::vector<Lame> lame_list() const;
  Lame lame() const;
  /// "times": {"t_end": T, "steps": K} -> K + 1 equispaced points.
  std::vector<double> times() const;

  /// Tolerance `key` from "tolerances", falling back to the pinned default.
  double tolerance(const std::string& key, double fallback) const;

  /// Command-line overrides.
  void override_seed(std::uint64_t seed);
  void override_tolerance(const std::string& key, double value);

  /// FNV-1a 64 hash of the canonical serialization, as 16 hex digits.
  std::string hash() const;

 private:
  const nlohmann::json& at(const std::string& key) const;
  nlohmann::json raw_;
};

KernelConfig parse_kernel(const nlohmann::json& j);

}  // namespace nlgrad::tools
