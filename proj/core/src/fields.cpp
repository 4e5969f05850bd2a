#include "nlgrad/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "nlgrad/error.hpp"
#include "nlgrad/symbols.hpp"

namespace nlgrad {
namespace {

// FFTW's planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n) {
    if (!data) throw Error("FFTW allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

class Plan {
 public:
  Plan(int dim, int grid, FftwBuffer& buf, int sign) {
    std::lock_guard lock(planner_mutex());
    int dims[3] = {grid, grid, grid};
    plan_ = fftw_plan_dft(dim, dims, buf.data, buf.data, sign, FFTW_ESTIMATE);
    if (!plan_) throw Error("FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

// Grid index of wave-vector component k (k mod G).
int wrap(int k, int grid) { return ((k % grid) + grid) % grid; }

std::size_t grid_index(const Mode& m, int grid) {
  std::size_t idx = 0;
  for (int i = 0; i < m.dim; ++i) idx = idx * static_cast<std::size_t>(grid) + static_cast<std::size_t>(wrap(m.k[i], grid));
  return idx;
}

// Grid points start at -pi, giving a factor exp(-i xi.(-pi)) = (-1)^{sum xi}.
double parity(const Mode& m) {
  int s = 0;
  for (int i = 0; i < m.dim; ++i) s += m.k[i];
  return (s % 2 == 0) ? 1.0 : -1.0;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SpectralField::SpectralField(int dim, int bound, int components, bool real)
    : lattice_(dim, bound), components_(components), real_(real) {
  if (components < 1) throw InvalidArgument("field needs at least one component");
  data_.assign(lattice_.size() * static_cast<std::size_t>(components), cplx{});
}

Eigen::Map<const CVecX> SpectralField::at(const Mode& m) const {
  if (!lattice_.contains(m)) throw InvalidArgument("mode outside the field truncation");
  return coeffs(lattice_.index(m));
}

void SpectralField::set(const Mode& m, const CVecX& value) {
  if (!lattice_.contains(m)) throw InvalidArgument("mode outside the field truncation");
  if (m.is_zero()) throw InvalidArgument("the zero mode of a zero-mean field cannot be set");
  if (value.size() != components_) throw InvalidArgument("component count mismatch");
  const std::size_t i = lattice_.index(m);
  coeffs(i) = value;
  if (real_) coeffs(lattice_.negated(i)) = value.conjugate();
}

void SpectralField::clear_mean() { coeffs(lattice_.zero_index()).setZero(); }

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    worst = std::max(worst, (coeffs(i) - coeffs(lattice_.negated(i)).conjugate()).cwiseAbs().maxCoeff());
  return worst;
}

void SpectralField::require_compatible(const SpectralField& other) const {
  if (!(lattice_ == other.lattice_) || components_ != other.components_)
    throw InvalidArgument("fields have different truncations or component counts");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  real_ = real_ && other.real_;
  clear_mean();
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  real_ = real_ && other.real_;
  clear_mean();
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  clear_mean();
  return *this;
}

SpectralField SpectralField::component(int c) const {
  if (c < 0 || c >= components_) throw InvalidArgument("component index out of range");
  SpectralField out(dim(), bound(), 1, real_);
  for (std::size_t i = 0; i < size(); ++i) out.coeffs(i)[0] = coeffs(i)[c];
  return out;
}

SpectralField SpectralField::padded(int bound) const {
  if (bound < this->bound()) throw InvalidArgument("padding cannot shrink a field");
  SpectralField out(dim(), bound, components_, real_);
  for (std::size_t i = 0; i < size(); ++i) out.coeffs(out.lattice().index(lattice_.mode(i))) = coeffs(i);
  return out;
}

std::size_t GridSamples::points() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(grid);
  return n;
}

double GridSamples::coordinate(int j) const { return -std::numbers::pi + 2.0 * std::numbers::pi * j / grid; }

RVec GridSamples::point(std::size_t p) const {
  RVec x(dim);
  for (int i = dim - 1; i >= 0; --i) {
    x[i] = coordinate(static_cast<int>(p % static_cast<std::size_t>(grid)));
    p /= static_cast<std::size_t>(grid);
  }
  return x;
}

ForwardResult forward_transform(const GridSamples& samples, int bound) {
  if (samples.dim < 1 || samples.dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (samples.grid < 2 * bound + 1) throw InvalidArgument("grid too small for the requested truncation");
  const std::size_t points = samples.points();
  const int comps = samples.components;
  if (samples.values.size() != points * static_cast<std::size_t>(comps))
    throw InvalidArgument("grid sample count does not match its shape");

  bool real = true;
  for (const cplx& v : samples.values)
    if (v.imag() != 0.0) {
      real = false;
      break;
    }

  ForwardResult result{SpectralField(samples.dim, bound, comps, real), std::vector<cplx>(comps)};
  FftwBuffer buf(points);
  Plan plan(samples.dim, samples.grid, buf, FFTW_FORWARD);
  const Lattice& lat = result.field.lattice();
  const double scale = 1.0 / static_cast<double>(points);
  for (int c = 0; c < comps; ++c) {
    for (std::size_t p = 0; p < points; ++p) {
      const cplx v = samples.values[p * comps + c];
      buf.data[p][0] = v.real();
      buf.data[p][1] = v.imag();
    }
    plan.execute();
    result.mean[c] = cplx(buf.data[0][0], buf.data[0][1]) * scale;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (i == lat.zero_index()) continue;
      const Mode m = lat.mode(i);
      const std::size_t g = grid_index(m, samples.grid);
      result.field.coeffs(i)[c] = parity(m) * scale * cplx(buf.data[g][0], buf.data[g][1]);
    }
  }
  if (real) {
    // Make the symmetry exact rather than exact-up-to-rounding.
    for (std::size_t i = lat.zero_index() + 1; i < lat.size(); ++i) {
      const std::size_t j = lat.negated(i);
      const CVecX avg = 0.5 * (result.field.coeffs(i) + result.field.coeffs(j).conjugate());
      result.field.coeffs(i) = avg;
      result.field.coeffs(j) = avg.conjugate();
    }
  }
  return result;
}

GridSamples inverse_transform(const SpectralField& field, int grid) {
  if (grid < 2 * field.bound() + 1) throw InvalidArgument("grid too small for the field truncation");
  GridSamples out{field.dim(), grid, field.components(), {}};
  const std::size_t points = out.points();
  const int comps = field.components();
  out.values.assign(points * comps, cplx{});
  FftwBuffer buf(points);
  Plan plan(field.dim(), grid, buf, FFTW_BACKWARD);
  const Lattice& lat = field.lattice();
  for (int c = 0; c < comps; ++c) {
    for (std::size_t p = 0; p < points; ++p) buf.data[p][0] = buf.data[p][1] = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Mode m = lat.mode(i);
      const cplx v = parity(m) * field.coeffs(i)[c];
      const std::size_t g = grid_index(m, grid);
      buf.data[g][0] += v.real();
      buf.data[g][1] += v.imag();
    }
    plan.execute();
    for (std::size_t p = 0; p < points; ++p) {
      const double im = field.is_real() ? 0.0 : buf.data[p][1];
      out.values[p * comps + c] = cplx(buf.data[p][0], im);
    }
  }
  return out;
}

GridSamples sample(int dim, int grid, int components, const std::function<CVecX(const RVec&)>& f) {
  GridSamples s{dim, grid, components, {}};
  const std::size_t points = s.points();
  s.values.resize(points * components);
  for (std::size_t p = 0; p < points; ++p) {
    const CVecX v = f(s.point(p));
    if (v.size() != components) throw InvalidArgument("sampled function returned the wrong component count");
    for (int c = 0; c < components; ++c) s.values[p * components + c] = v[c];
  }
  return s;
}

CVecX evaluate(const SpectralField& field, const RVec& x) {
  if (x.size() != field.dim()) throw InvalidArgument("point dimension mismatch");
  CVecX out = CVecX::Zero(field.components());
  const Lattice& lat = field.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double phase = lat.mode(i).to_real().dot(x);
    out += std::polar(1.0, phase) * field.coeffs(i);
  }
  return out;
}

cplx inner(const SpectralField& u, const SpectralField& v) {
  if (!(u.lattice() == v.lattice()) || u.components() != v.components())
    throw InvalidArgument("inner product of incompatible fields");
  cplx total{};
  const auto a = u.raw();
  const auto b = v.raw();
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * std::conj(b[i]);
  return total;
}

double elastic_energy(const SpectralField& u, const SymbolTable& table, const Lame& lame) {
  if (u.components() != u.dim() || table.dim() != u.dim()) throw InvalidArgument("elastic energy needs a vector field");
  if (table.bound() < u.bound()) throw InvalidArgument("symbol table does not cover the field truncation");
  double twice = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Mode m = u.lattice().mode(i);
    if (m.is_zero()) continue;
    const CVec& lam = table.at(m);
    const CVecX uh = u.coeffs(i);
    const cplx proj = lam.dot(uh);  // lambda^H u^ (Eigen's dot conjugates the left operand)
    twice += lame.mu * lam.squaredNorm() * uh.squaredNorm() + (lame.lambda + lame.mu) * std::norm(proj);
  }
  return 0.5 * twice;
}

FieldNorms norms(const SpectralField& u, const SymbolTable* table, const std::optional<Lame>& lame) {
  FieldNorms out;
  double l2 = 0.0;
  for (const cplx& c : u.raw()) l2 += std::norm(c);
  out.l2 = std::sqrt(l2);
  if (!table) {
    if (lame) throw InvalidArgument("the V-norm needs a symbol table");
    return out;
  }
  if (table->dim() != u.dim() || table->bound() < u.bound())
    throw InvalidArgument("symbol table does not cover the field truncation");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Mode m = u.lattice().mode(i);
    if (m.is_zero()) continue;
    s += table->at(m).squaredNorm() * u.coeffs(i).squaredNorm();
  }
  out.energy = std::sqrt(s);
  if (lame) out.v_norm = std::sqrt(l2 + elastic_energy(u, *table, *lame));
  return out;
}

SpectralField random_field(std::uint64_t seed, int dim, int bound, int components, double decay) {
  if (decay < 0.0) throw InvalidArgument("spectral decay must be non-negative");
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL> engine(seed);
  // 53 high bits -> [0, 1); avoids implementation-defined distributions.
  auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  SpectralField f(dim, bound, components, true);
  const Lattice& lat = f.lattice();
  for (std::size_t i = lat.zero_index() + 1; i < lat.size(); ++i) {
    const Mode m = lat.mode(i);
    const double amp = std::pow(1.0 + m.norm2(), -0.5 * decay);
    CVecX v(components);
    for (int c = 0; c < components; ++c) v[c] = std::polar(amp, 2.0 * std::numbers::pi * uniform());
    f.coeffs(i) = v;
    f.coeffs(lat.negated(i)) = v.conjugate();
  }
  return f;
}

void write_field_csv(const SpectralField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  for (int a = 0; a < field.dim(); ++a) out << (a ? "," : "") << 'k' << a + 1;
  for (int c = 0; c < field.components(); ++c) out << ",re" << c << ",im" << c;
  out << '\n';
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Mode m = field.lattice().mode(i);
    for (int a = 0; a < field.dim(); ++a) out << (a ? "," : "") << m.k[a];
    for (int c = 0; c < field.components(); ++c)
      out << ',' << fmt(field.coeffs(i)[c].real()) << ',' << fmt(field.coeffs(i)[c].imag());
    out << '\n';
  }
}

}  // namespace nlgrad
