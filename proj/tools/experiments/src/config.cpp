#include "nlgrad_tools/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <nlgrad/error.hpp>

namespace nlgrad::tools {

using nlohmann::json;

namespace {

Normalization parse_normalization(const std::string& s) {
  if (s == "first_moment") return Normalization::FirstMoment;
  if (s == "unit_mass") return Normalization::UnitMass;
  if (s == "second_moment") return Normalization::SecondMoment;
  throw ConfigError("unknown normalization '" + s + "'");
}

std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::FirstMoment: return "first_moment";
    case Normalization::UnitMass: return "unit_mass";
    case Normalization::SecondMoment: return "second_moment";
  }
  return "first_moment";
}

std::vector<double> to_doubles(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

RVec to_rvec(const json& j, int dimension, const std::string& key) {
  const auto v = to_doubles(j, key);
  if (static_cast<int>(v.size()) != dimension) throw ConfigError("'" + key + "' must have one entry per dimension");
  RVec r(dimension);
  for (int i = 0; i < dimension; ++i) r(i) = v[i];
  if (!(r.norm() > 0.0)) throw ConfigError("'" + key + "' must be a nonzero vector");
  return r;
}

}  // namespace

KernelConfig parse_kernel(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ConfigError("kernel entries need a string 'family'");
  KernelConfig k;
  try {
    switch (family_from_string(j["family"].get<std::string>())) {
      case KernelFamily::Constant: k.profile = KernelProfile::constant(); break;
      case KernelFamily::Fractional:
        if (!j.contains("beta") || !j["beta"].is_number()) throw ConfigError("fractional kernels need 'beta'");
        k.profile = KernelProfile::fractional(j["beta"].get<double>());
        break;
      case KernelFamily::SineExample: k.profile = KernelProfile::sine_example(); break;
      case KernelFamily::Tabulated:
        if (!j.contains("radii") || !j.contains("values")) throw ConfigError("tabulated kernels need 'radii' and 'values'");
        k.profile = KernelProfile::tabulated(to_doubles(j["radii"], "radii"), to_doubles(j["values"], "values"));
        break;
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("normalization")) {
    if (!j["normalization"].is_string()) throw ConfigError("'normalization' must be a string");
    k.normalization = parse_normalization(j["normalization"].get<std::string>());
  }
  return k;
}

KernelSpec KernelConfig::make(int dimension, double horizon) const {
  try {
    return KernelSpec::normalize(profile, dimension, horizon, normalization);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::string KernelConfig::label() const {
  std::string s = to_string(profile.family());
  if (profile.family() == KernelFamily::Fractional) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%g)", profile.beta());
    s += buf;
  }
  if (normalization != Normalization::FirstMoment) s += "/" + normalization_name(normalization);
  return s;
}

Config::Config(json raw) : raw_(std::move(raw)) {
  if (!raw_.is_object()) throw ConfigError("configuration must be a JSON object");
  experiment();
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + path.string());
  return Config(std::move(j));
}

const json& Config::at(const std::string& key) const {
  if (!raw_.contains(key)) throw ConfigError("missing key '" + key + "'");
  return raw_[key];
}

std::string Config::experiment() const {
  const json& e = at("experiment");
  if (!e.is_string()) throw ConfigError("'experiment' must be a string");
  return e.get<std::string>();
}

std::string Config::name() const { return text("name", experiment()); }

int Config::integer(const std::string& key, std::optional<int> fallback) const {
  if (!raw_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing key '" + key + "'");
  }
  const json& v = raw_[key];
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return v.get<int>();
}

double Config::number(const std::string& key, std::optional<double> fallback) const {
  if (!raw_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing key '" + key + "'");
  }
  const json& v = raw_[key];
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::string Config::text(const std::string& key, std::optional<std::string> fallback) const {
  if (!raw_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing key '" + key + "'");
  }
  const json& v = raw_[key];
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!raw_.contains(key)) return fallback;
  if (!raw_[key].is_boolean()) throw ConfigError("'" + key + "' must be a boolean");
  return raw_[key].get<bool>();
}

std::vector<double> Config::numbers(const std::string& key) const { return to_doubles(at(key), key); }

int Config::bound(int fallback) const {
  const int n = integer("bound", fallback);
  if (n < 2) throw ConfigError("'bound' must be at least 2");
  return n;
}

int Config::dimension(int fallback) const {
  const int d = integer("dimension", fallback);
  if (d < 1 || d > 3) throw ConfigError("'dimension' must be 1, 2 or 3");
  return d;
}

std::uint64_t Config::seed() const {
  if (!raw_.contains("seed")) return 1;
  const json& v = raw_["seed"];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError("'seed' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> Config::deltas() const {
  const auto d = numbers("deltas");
  if (d.empty()) throw ConfigError("'deltas' must not be empty");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw ConfigError("'deltas' must be positive");
    if (i > 0 && !(d[i] < d[i - 1])) throw ConfigError("'deltas' must be strictly decreasing");
  }
  return d;
}

KernelConfig Config::kernel(const std::string& key) const {
  if (!raw_.contains(key)) return KernelConfig{};
  return parse_kernel(raw_[key]);
}

std::vector<KernelConfig> Config::kernels() const {
  const json& list = at("kernels");
  if (!list.is_array() || list.empty()) throw ConfigError("'kernels' must be a non-empty array");
  std::vector<KernelConfig> out;
  for (const auto& k : list) out.push_back(parse_kernel(k));
  return out;
}

Orientation Config::orientation(int dimension) const {
  if (!raw_.contains("orientation")) return Orientation::axis(dimension, 0);
  const json& o = raw_["orientation"];
  if (o.contains("angle")) {
    if (dimension != 2) throw ConfigError("'orientation.angle' needs dimension 2");
    if (!o["angle"].is_number()) throw ConfigError("'orientation.angle' must be a number");
    return Orientation::angle(o["angle"].get<double>());
  }
  if (o.contains("vector")) return Orientation::normalized(to_rvec(o["vector"], dimension, "orientation.vector"));
  throw ConfigError("'orientation' needs 'angle' or 'vector'");
}

std::vector<Orientation> Config::orientations(int dimension) const {
  if (!raw_.contains("orientations")) return {orientation(dimension)};
  const json& o = raw_["orientations"];
  std::vector<Orientation> out;
  if (o.is_object() && o.contains("angles")) {
    if (dimension != 2) throw ConfigError("'orientations.angles' needs dimension 2");
    if (!o["angles"].is_number_integer() || o["angles"].get<int>() < 1)
      throw ConfigError("'orientations.angles' must be a positive integer");
    const int m = o["angles"].get<int>();
    const double offset = o.value("offset", 0.0);
    for (int j = 0; j < m; ++j) out.push_back(Orientation::angle(offset + 2.0 * std::numbers::pi * j / m));
    return out;
  }
  if (!o.is_array() || o.empty()) throw ConfigError("'orientations' must be {\"angles\": m} or a list of vectors");
  for (const auto& v : o) out.push_back(Orientation::normalized(to_rvec(v, dimension, "orientations")));
  return out;
}

namespace {
Lame parse_lame(const json& j) {
  if (!j.is_object() || !j.contains("mu") || !j.contains("lambda") || !j["mu"].is_number() ||
      !j["lambda"].is_number())
    throw ConfigError("Lame entries need numeric 'mu' and 'lambda'");
  Lame l{j["mu"].get<double>(), j["lambda"].get<double>()};
  if (!(l.mu > 0.0) || !(l.lambda + 2.0 * l.mu > 0.0))
    throw ConfigError("inadmissible Lame constants (need mu > 0 and lambda + 2 mu > 0)");
  return l;
}
}  // namespace

std::vector<Lame> Config::lame_list() const {
  if (raw_.contains("lame_list")) {
    const json& l = raw_["lame_list"];
    if (!l.is_array() || l.empty()) throw ConfigError("'lame_list' must be a non-empty array");
    std::vector<Lame> out;
    for (const auto& e : l) out.push_back(parse_lame(e));
    return out;
  }
  return {lame()};
}

Lame Config::lame() const { return raw_.contains("lame") ? parse_lame(raw_["lame"]) : Lame{}; }

std::vector<double> Config::times() const {
  const json& t = at("times");
  if (!t.is_object() || !t.contains("t_end") || !t.contains("steps") || !t["t_end"].is_number() ||
      !t["steps"].is_number_integer())
    throw ConfigError("'times' needs numeric 't_end' and integer 'steps'");
  const double end = t["t_end"].get<double>();
  const int steps = t["steps"].get<int>();
  if (!(end > 0.0) || steps < 1) throw ConfigError("'times' needs t_end > 0 and steps >= 1");
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) out[k] = end * k / steps;
  return out;
}

double Config::tolerance(const std::string& key, double fallback) const {
  if (!raw_.contains("tolerances")) return fallback;
  const json& t = raw_["tolerances"];
  if (!t.contains(key)) return fallback;
  if (!t[key].is_number()) throw ConfigError("tolerance '" + key + "' must be a number");
  return t[key].get<double>();
}

void Config::override_seed(std::uint64_t seed) { raw_["seed"] = seed; }

void Config::override_tolerance(const std::string& key, double value) { raw_["tolerances"][key] = value; }

std::string Config::hash() const {
  const std::string text = raw_.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nlgrad::tools
