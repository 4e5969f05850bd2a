#include "nlgrad/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include "nlgrad/error.hpp"
#include "nlgrad/parallel.hpp"

namespace nlgrad {
namespace {

constexpr cplx kI{0.0, 1.0};

// cos(x) - 1 without cancellation for small x.
double cosm1(double x) {
  const double s = std::sin(0.5 * x);
  return -2.0 * s * s;
}

struct Sum {
  RVec value;
  double scale = 0.0;
};

// Half-ball rules shared by all modes of one table; keyed by level and the
// rounded-up unit-scaled frequency so neighbouring modes reuse a rule.
class RuleCache {
 public:
  RuleCache(const KernelSpec& kernel, Orientation n, int vanishing_order, QuadratureOptions options)
      : kernel_(kernel), n_(std::move(n)), order_(vanishing_order), options_(options) {}

  std::shared_ptr<const QuadratureRule> get(int level, double frequency) {
    const int bucket = static_cast<int>(std::ceil(frequency - 1e-12));
    const auto key = std::make_pair(level, bucket);
    {
      std::lock_guard lock(mutex_);
      if (auto it = rules_.find(key); it != rules_.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(
        make_halfball_rule(kernel_, n_, level, static_cast<double>(bucket), order_, options_));
    std::lock_guard lock(mutex_);
    return rules_.emplace(key, std::move(rule)).first->second;
  }

 private:
  const KernelSpec& kernel_;
  Orientation n_;
  int order_;
  QuadratureOptions options_;
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const QuadratureRule>> rules_;
};

// Re lambda(xi) = 2 factor sum_q A_q e_q sum_i W_i (cos(delta rho_i xi.e_q) - 1).
Sum real_part(const QuadratureRule& rule, const RVec& xi, double delta, double factor) {
  const int d = static_cast<int>(xi.size());
  Sum out{RVec::Zero(d), 0.0};
  const RVec scaled = delta * xi;
  const auto& rn = rule.radial.nodes;
  const auto& rw = rule.radial.weights;
  for (std::size_t q = 0; q < rule.angular.directions.size(); ++q) {
    const RVec& e = rule.angular.directions[q];
    const double c = scaled.dot(e);
    double s = 0.0, sabs = 0.0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      const double v = rw[i] * cosm1(rn[i] * c);
      s += v;
      sabs += std::abs(v);
    }
    out.value += rule.angular.weights[q] * s * e;
    out.scale += rule.angular.weights[q] * sabs;
  }
  out.value *= 2.0 * factor;
  out.scale *= 2.0 * factor;
  return out;
}

// Lambda(k) = 2 factor sum_q A_q (e_q.n) sum_i W_i sin(delta k rho_i e_q.n), n the rule axis.
Sum radial_part(const QuadratureRule& rule, const RVec& axis, double k, double delta, double factor) {
  Sum out{RVec::Zero(1), 0.0};
  const auto& rn = rule.radial.nodes;
  const auto& rw = rule.radial.weights;
  for (std::size_t q = 0; q < rule.angular.directions.size(); ++q) {
    const double c = rule.angular.directions[q].dot(axis);
    double s = 0.0, sabs = 0.0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      const double v = rw[i] * c * std::sin(delta * k * rn[i] * c);
      s += v;
      sabs += std::abs(v);
    }
    out.value[0] += rule.angular.weights[q] * s;
    out.scale += rule.angular.weights[q] * sabs;
  }
  out.value *= 2.0 * factor;
  out.scale *= 2.0 * factor;
  return out;
}

// m(k) = 2 factor sum_q A_q sum_i W_i (cos(delta k rho_i e_q.n) - 1).
Sum mass_part(const QuadratureRule& rule, const RVec& axis, double k, double delta, double factor) {
  Sum out{RVec::Zero(1), 0.0};
  const auto& rn = rule.radial.nodes;
  const auto& rw = rule.radial.weights;
  for (std::size_t q = 0; q < rule.angular.directions.size(); ++q) {
    const double c = rule.angular.directions[q].dot(axis);
    double s = 0.0, sabs = 0.0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      const double v = rw[i] * cosm1(delta * k * rn[i] * c);
      s += v;
      sabs += std::abs(v);
    }
    out.value[0] += rule.angular.weights[q] * s;
    out.scale += rule.angular.weights[q] * sabs;
  }
  out.value *= 2.0 * factor;
  out.scale *= 2.0 * factor;
  return out;
}

bool agrees(const Sum& coarse, const Sum& fine, double extra_ref, double tol) {
  const double diff = (fine.value - coarse.value).norm();
  const double ref = std::max({fine.value.norm(), extra_ref, 1e-6 * fine.scale});
  return diff <= tol * ref;
}

// Refines `eval(level)` until two successive levels agree.
template <class Eval>
Sum refine(Eval&& eval, const QuadratureOptions& options, double extra_ref, const char* what) {
  Sum previous = eval(0);
  for (int level = 1; level <= options.max_level; ++level) {
    Sum current = eval(level);
    if (agrees(previous, current, extra_ref, options.tolerance)) return current;
    previous = std::move(current);
  }
  throw QuadratureError(std::string(what) + ": quadrature did not converge within the refinement limit");
}

double radial_scalar(const KernelSpec& kernel, double k, const QuadratureOptions& options, bool mass) {
  if (k == 0.0) return 0.0;
  const int d = kernel.dimension();
  const Orientation axis = Orientation::axis(d, 0);
  const double delta = kernel.horizon();
  const int order = mass ? 2 : 1;
  const double factor = kernel.integral_scale();
  const Sum s = refine(
      [&](int level) {
        const QuadratureRule rule = make_halfball_rule(kernel, axis, level, delta * k, order, options);
        return mass ? mass_part(rule, axis.vector(), k, delta, factor) : radial_part(rule, axis.vector(), k, delta, factor);
      },
      options, 0.0, mass ? "m_delta" : "lambda_radial");
  return s.value[0];
}

// Radial quantities for every distinct |xi|^2 on the lattice.
std::map<int, double> radial_map(const KernelSpec& kernel, const Lattice& lattice, const SymbolOptions& options,
                                 bool mass) {
  std::set<int> keys;
  for (std::size_t i = lattice.zero_index() + 1; i < lattice.size(); ++i) keys.insert(lattice.mode(i).norm2());
  std::vector<int> list(keys.begin(), keys.end());
  std::vector<double> vals(list.size());
  parallel_for(list.size(), options.threads, [&](std::size_t i) {
    vals[i] = radial_scalar(kernel, std::sqrt(static_cast<double>(list[i])), options.quadrature, mass);
  });
  std::map<int, double> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.emplace(list[i], vals[i]);
  return out;
}

// Canonical modes that stress the rule most: largest |xi| (corner), the
// longest axis mode and the smallest nonzero modes.
std::vector<Mode> probe_modes(int d, int bound) {
  std::vector<Mode> probes;
  Mode corner{{0, 0, 0}, d}, axis{{0, 0, 0}, d}, unit{{0, 0, 0}, d}, mixed{{0, 0, 0}, d};
  for (int i = 0; i < d; ++i) corner.k[i] = bound;
  axis.k[0] = bound;
  unit.k[d - 1] = 1;
  mixed.k[0] = std::max(1, bound / 2);
  if (d > 1) mixed.k[1] = -std::max(1, bound / 3);
  probes = {corner, axis, unit, mixed};
  if (d > 1) {
    Mode last{{0, 0, 0}, d};
    last.k[d - 1] = bound;
    probes.push_back(last);
  }
  return probes;
}

void require_table_args(const KernelSpec& kernel, int bound) {
  if (bound < 1) throw InvalidArgument("symbol table bound N must be >= 1");
  if (kernel.dimension() < 1 || kernel.dimension() > 3) throw InvalidArgument("unsupported dimension");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(Normalization kind) {
  switch (kind) {
    case Normalization::FirstMoment:
      return "FirstMoment";
    case Normalization::UnitMass:
      return "UnitMass";
    case Normalization::SecondMoment:
      return "SecondMoment";
  }
  return "?";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "FirstMoment") return Normalization::FirstMoment;
  if (s == "UnitMass") return Normalization::UnitMass;
  if (s == "SecondMoment") return Normalization::SecondMoment;
  throw InvalidArgument("unknown normalization '" + s + "'");
}

SymbolKind kind_from_string(const std::string& s) {
  if (s == "HalfSpace") return SymbolKind::HalfSpace;
  if (s == "Star") return SymbolKind::Star;
  if (s == "Local") return SymbolKind::Local;
  throw InvalidArgument("unknown symbol kind '" + s + "'");
}

std::string join_vec(const RVec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

RVec parse_vec(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  RVec v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

}  // namespace

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::HalfSpace:
      return "HalfSpace";
    case SymbolKind::Star:
      return "Star";
    case SymbolKind::Local:
      return "Local";
  }
  return "?";
}

SymbolTable SymbolTable::local(int dim, int bound) {
  SymbolTable t;
  t.kind_ = SymbolKind::Local;
  t.lattice_ = Lattice(dim, bound);
  t.values_.assign(t.lattice_.size(), CVec::Zero(dim));
  for (std::size_t i = 0; i < t.lattice_.size(); ++i) t.values_[i] = kI * t.lattice_.mode(i).to_real().cast<cplx>();
  t.rebuild_radial();
  return t;
}

const CVec& SymbolTable::at(const Mode& m) const {
  if (!lattice_.contains(m)) throw InvalidArgument("mode outside the symbol table");
  return values_[lattice_.index(m)];
}

double SymbolTable::lambda_radial(int norm2) const {
  if (norm2 == 0) return 0.0;
  auto it = radial_.find(norm2);
  if (it == radial_.end()) throw InvalidArgument("|xi|^2 not present in the symbol table");
  return it->second;
}

void SymbolTable::rebuild_radial() {
  radial_.clear();
  for (std::size_t i = lattice_.zero_index() + 1; i < lattice_.size(); ++i) {
    const Mode m = lattice_.mode(i);
    if (radial_.count(m.norm2())) continue;
    const RVec xi = m.to_real();
    radial_.emplace(m.norm2(), values_[i].imag().dot(xi) / xi.norm());
  }
}

SymbolTable SymbolTable::reflected() const {
  SymbolTable t = *this;
  if (orientation_) t.orientation_ = -*orientation_;
  // Im(-conj lambda) = Im(lambda), so Lambda carries over unchanged.
  for (auto& v : t.values_) v = -v.conjugate();
  return t;
}

void SymbolTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write symbol cache " + path.string());
  out << "# nlgrad-symbols kind=" << to_string(kind_);
  if (kernel_) {
    out << " family=" << to_string(kernel_->family()) << " beta=" << format_double(kernel_->profile().beta())
        << " dimension=" << kernel_->dimension() << " delta=" << format_double(kernel_->horizon())
        << " normalization=" << to_string(kernel_->normalization_kind())
        << " cutoff=" << format_double(kernel_->cutoff());
  }
  if (orientation_) out << " n=" << join_vec(orientation_->vector());
  if (kind_ == SymbolKind::Star) out << " k=" << join_vec(star_);
  out << " dim=" << dim() << " N=" << bound() << " tol=" << format_double(tolerance_) << '\n';
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    if (i == lattice_.zero_index()) continue;
    const Mode m = lattice_.mode(i);
    for (int a = 0; a < dim(); ++a) out << (a ? " " : "") << m.k[a];
    for (int a = 0; a < dim(); ++a)
      out << ' ' << format_double(values_[i][a].real()) << ' ' << format_double(values_[i][a].imag());
    out << '\n';
  }
  if (!out) throw Error("failed writing symbol cache " + path.string());
}

SymbolTable SymbolTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open symbol cache " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string token;
  hs >> token;
  std::string tag;
  hs >> tag;
  if (token != "#" || tag != "nlgrad-symbols") throw InvalidArgument("not a symbol cache: " + path.string());
  std::map<std::string, std::string> kv;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed symbol cache header");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("symbol cache header lacks '" + key + "'");
    return it->second;
  };
  SymbolTable t;
  try {
    t.kind_ = kind_from_string(need("kind"));
    const int dim = std::stoi(need("dim"));
    const int bound = std::stoi(need("N"));
    t.tolerance_ = std::stod(need("tol"));
    t.lattice_ = Lattice(dim, bound);
    if (kv.count("family") && kv["family"] != "Tabulated") {
      const KernelFamily family = family_from_string(kv["family"]);
      KernelProfile profile = family == KernelFamily::Constant      ? KernelProfile::constant()
                              : family == KernelFamily::Fractional ? KernelProfile::fractional(std::stod(kv["beta"]))
                                                                   : KernelProfile::sine_example();
      KernelSpec k = KernelSpec::normalize(profile, std::stoi(need("dimension")), std::stod(need("delta")),
                                           normalization_from_string(need("normalization")));
      const double cutoff = std::stod(need("cutoff"));
      if (cutoff > 0.0) k = k.epsilon_cutoff(cutoff);
      t.kernel_ = k;
    }
    if (kv.count("n")) t.orientation_ = Orientation(parse_vec(kv["n"]));
    if (kv.count("k")) t.star_ = parse_vec(kv["k"]);
    t.values_.assign(t.lattice_.size(), CVec::Zero(dim));
    std::vector<bool> seen(t.lattice_.size(), false);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      Mode m{{0, 0, 0}, dim};
      for (int a = 0; a < dim; ++a)
        if (!(ls >> m.k[a])) throw InvalidArgument("malformed symbol cache line");
      if (!t.lattice_.contains(m) || m.is_zero()) throw InvalidArgument("symbol cache mode out of range");
      CVec v(dim);
      for (int a = 0; a < dim; ++a) {
        std::string re, im;
        if (!(ls >> re >> im)) throw InvalidArgument("malformed symbol cache line");
        v[a] = cplx(std::stod(re), std::stod(im));
      }
      const std::size_t idx = t.lattice_.index(m);
      if (seen[idx]) throw InvalidArgument("duplicate mode in symbol cache");
      seen[idx] = true;
      t.values_[idx] = v;
      ++count;
    }
    if (count + 1 != t.lattice_.size()) throw InvalidArgument("symbol cache is incomplete");
  } catch (const std::logic_error& e) {
    throw InvalidArgument(std::string("malformed symbol cache: ") + e.what());
  }
  t.rebuild_radial();
  return t;
}

SymbolTable build_table(const KernelSpec& kernel, const Orientation& n, int bound, const SymbolOptions& options) {
  require_table_args(kernel, bound);
  if (n.dim() != kernel.dimension()) throw InvalidArgument("orientation and kernel dimensions differ");
  const int d = kernel.dimension();
  const double delta = kernel.horizon();
  const QuadratureOptions& qo = options.quadrature;

  SymbolTable t;
  t.kind_ = SymbolKind::HalfSpace;
  t.lattice_ = Lattice(d, bound);
  t.kernel_ = kernel;
  t.orientation_ = n;
  t.tolerance_ = qo.tolerance;
  t.radial_ = radial_map(kernel, t.lattice_, options, false);

  RuleCache rules(kernel, n, 2, qo);
  auto real_at = [&](const RVec& xi, int level) {
    return real_part(*rules.get(level, delta * xi.norm()), xi, delta, kernel.integral_scale());
  };

  // Pick the level from the probes: first level agreeing with its successor,
  // then use that successor for every mode.
  int table_level = 1;
  for (const Mode& probe : probe_modes(d, bound)) {
    const RVec xi = probe.to_real();
    const double lam = std::abs(t.radial_.at(probe.norm2()));
    Sum previous = real_at(xi, 0);
    int chosen = -1;
    for (int level = 1; level <= qo.max_level; ++level) {
      Sum current = real_at(xi, level);
      if (agrees(previous, current, lam, qo.tolerance)) {
        chosen = level;
        break;
      }
      previous = std::move(current);
    }
    if (chosen < 0) throw QuadratureError("symbol table quadrature did not converge for the probe modes");
    table_level = std::max(table_level, chosen);
  }

  t.values_.assign(t.lattice_.size(), CVec::Zero(d));
  const std::size_t first = t.lattice_.zero_index() + 1;
  parallel_for(t.lattice_.size() - first, options.threads, [&](std::size_t j) {
    const std::size_t i = first + j;
    const Mode m = t.lattice_.mode(i);
    const RVec xi = m.to_real();
    const RVec re = real_at(xi, table_level).value;
    const double lam = t.radial_.at(m.norm2());
    CVec v(d);
    for (int a = 0; a < d; ++a) v[a] = cplx(re[a], lam * xi[a] / xi.norm());
    t.values_[i] = v;
    t.values_[t.lattice_.negated(i)] = v.conjugate();
  });
  for (std::size_t i = 0; i < t.lattice_.size(); ++i)
    if (i != t.lattice_.zero_index() && !(t.values_[i].norm() > 0.0))
      throw Error("degenerate kernel: symbol vanishes at a nonzero mode");
  return t;
}

SymbolTable build_star_table(const KernelSpec& kernel, const RVec& kvec, int bound, const SymbolOptions& options) {
  require_table_args(kernel, bound);
  const int d = kernel.dimension();
  if (kvec.size() != d) throw InvalidArgument("modification vector has the wrong dimension");
  SymbolTable t;
  t.kind_ = SymbolKind::Star;
  t.lattice_ = Lattice(d, bound);
  t.kernel_ = kernel;
  t.star_ = kvec;
  t.tolerance_ = options.quadrature.tolerance;
  t.radial_ = radial_map(kernel, t.lattice_, options, false);
  const std::map<int, double> mass = radial_map(kernel, t.lattice_, options, true);
  t.values_.assign(t.lattice_.size(), CVec::Zero(d));
  for (std::size_t i = t.lattice_.zero_index() + 1; i < t.lattice_.size(); ++i) {
    const Mode m = t.lattice_.mode(i);
    const RVec xi = m.to_real();
    const double lam = t.radial_.at(m.norm2());
    const double md = mass.at(m.norm2());
    CVec v(d);
    for (int a = 0; a < d; ++a) v[a] = cplx(md * kvec[a], lam * xi[a] / xi.norm());
    t.values_[i] = v;
    t.values_[t.lattice_.negated(i)] = v.conjugate();
  }
  return t;
}

CVec symbol(const KernelSpec& kernel, const Orientation& n, const RVec& xi, const QuadratureOptions& options) {
  const int d = kernel.dimension();
  if (xi.size() != d) throw InvalidArgument("wave vector has the wrong dimension");
  if (xi.norm() == 0.0) return CVec::Zero(d);
  return integrate_halfball(
      kernel, n,
      [&](double r, const RVec& e) {
        const double phase = r * xi.dot(e);
        const cplx f = cplx(cosm1(phase), std::sin(phase));
        return CVec((2.0 * f) * e.cast<cplx>());
      },
      options, kernel.horizon() * xi.norm(), 1);
}

double lambda_radial(const KernelSpec& kernel, double xi_norm, const QuadratureOptions& options) {
  if (xi_norm < 0.0) throw InvalidArgument("|xi| must be non-negative");
  return radial_scalar(kernel, xi_norm, options, false);
}

double m_delta(const KernelSpec& kernel, const RVec& xi, const QuadratureOptions& options) {
  if (xi.size() != kernel.dimension()) throw InvalidArgument("wave vector has the wrong dimension");
  return radial_scalar(kernel, xi.norm(), options, true);
}

CVec star_symbol(const KernelSpec& kernel, const RVec& kvec, const RVec& xi, const QuadratureOptions& options) {
  const int d = kernel.dimension();
  if (xi.size() != d || kvec.size() != d) throw InvalidArgument("vector dimension mismatch");
  if (xi.norm() == 0.0) throw InvalidArgument("star symbol needs xi != 0");
  const double lam = lambda_radial(kernel, xi.norm(), options);
  const double md = m_delta(kernel, xi, options);
  CVec v(d);
  for (int a = 0; a < d; ++a) v[a] = cplx(md * kvec[a], lam * xi[a] / xi.norm());
  return v;
}

double averaged_energy_density(const KernelSpec& kernel, const RVec& xi, int samples,
                               const QuadratureOptions& options) {
  if (kernel.dimension() != 2) throw InvalidArgument("orientation averaging is implemented in two dimensions");
  if (samples < 8) throw InvalidArgument("averaging needs at least 8 orientations");
  if (xi.norm() == 0.0) throw InvalidArgument("averaged density needs xi != 0");
  const double lam = lambda_radial(kernel, xi.norm(), options);
  const double delta = kernel.horizon();
  double total = 0.0;
  for (int j = 0; j < samples; ++j) {
    const Orientation n = Orientation::angle(2.0 * std::numbers::pi * j / samples);
    const Sum re = refine(
        [&](int level) {
          return real_part(make_halfball_rule(kernel, n, level, delta * xi.norm(), 2, options), xi, delta,
                           kernel.integral_scale());
        },
        options, std::abs(lam), "averaged_energy_density");
    total += re.value.squaredNorm() + lam * lam;
  }
  return total / samples;
}

BoundsReport verify_bounds(const SymbolTable& table) {
  BoundsReport r;
  r.upper_bound = std::sqrt(2.0) * table.dim();
  r.min_abs = std::numeric_limits<double>::infinity();
  const Lattice& lat = table.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.zero_index()) continue;
    const Mode m = lat.mode(i);
    const double a = table[i].norm();
    const double ratio = a / std::sqrt(static_cast<double>(m.norm2()));
    if (a < r.min_abs) {
      r.min_abs = a;
      r.argmin = m;
    }
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax = m;
    }
  }
  if (lat.size() <= 1) r.min_abs = 0.0;
  return r;
}

}  // namespace nlgrad
