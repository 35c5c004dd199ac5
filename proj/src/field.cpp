#include "ftz/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace ftz {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Unscaled 2D DFT in place: exponent sign -1 for forward, +1 for inverse.
void dft2(Eigen::MatrixXcd& data, bool inverse) {
  thread_local Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Eigen::Index m = data.rows();
  std::vector<cplx> in(m), out(m);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      for (Eigen::Index r = 0; r < m; ++r) in[r] = data(r, c);
      if (inverse)
        fft.inv(out, in);
      else
        fft.fwd(out, in);
      for (Eigen::Index r = 0; r < m; ++r) data(r, c) = out[r];
    }
    data.transposeInPlace();
  }
}

void checkerboard(Eigen::MatrixXcd& data) {
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      if ((i + j) & 1) data(i, j) = -data(i, j);
}

void require_space(const ScalarField& f, const char* what) {
  if (f.domain() != Domain::space)
    throw std::invalid_argument(std::string(what) + ": expected a space-domain field");
}

// Indices whose row (or column) maximum exceeds cutoff * global maximum.
std::vector<int> active_indices(const Eigen::VectorXd& line_max, double cutoff) {
  std::vector<int> idx;
  const double top = line_max.maxCoeff();
  for (Eigen::Index k = 0; k < line_max.size(); ++k)
    if (line_max(k) > cutoff * top) idx.push_back(static_cast<int>(k));
  if (idx.empty()) idx.push_back(static_cast<int>(line_max.size() / 2));
  return idx;
}

}  // namespace

Grid::Grid(double extent, int points) : extent_(extent), points_(points) {
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("grid extent must be positive");
  if (!is_power_of_two(points) || points < 8)
    throw std::invalid_argument("grid points must be a power of two and at least 8");
}

Grid make_grid(double extent, int points) { return Grid(extent, points); }

ScalarField::ScalarField(Grid grid, Domain domain, Eigen::MatrixXcd samples)
    : grid_(grid), domain_(domain), samples_(std::move(samples)) {
  if (samples_.rows() != grid_.points() || samples_.cols() != grid_.points())
    throw std::invalid_argument("field samples do not match the grid size");
  if (!samples_.allFinite()) throw std::invalid_argument("field samples must be finite");
}

ScalarField ScalarField::constant(const Grid& grid, cplx value, Domain domain) {
  return ScalarField(grid, domain,
                     Eigen::MatrixXcd::Constant(grid.points(), grid.points(), value));
}

Vec2 ScalarField::node(int i, int j) const {
  if (domain_ == Domain::space) return {grid_.coordinate(i), grid_.coordinate(j)};
  return {grid_.frequency(i), grid_.frequency(j)};
}

void ScalarField::require_compatible(const ScalarField& other) const {
  if (!(grid_ == other.grid_) || domain_ != other.domain_)
    throw std::invalid_argument("fields live on different grids or domains");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_compatible(other);
  samples_ += other.samples_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_compatible(other);
  samples_ -= other.samples_;
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& other) {
  require_compatible(other);
  samples_.array() *= other.samples_.array();
  return *this;
}

ScalarField& ScalarField::operator*=(cplx c) {
  samples_ *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(cplx c, ScalarField a) { return a *= c; }

ScalarField abs_pow(const ScalarField& f, double p) {
  Eigen::MatrixXcd s = f.samples().cwiseAbs().array().pow(p).cast<cplx>();
  return ScalarField(f.grid(), f.domain(), std::move(s));
}

ScalarField fourier(const ScalarField& f, Direction direction) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  const double m = g.points();
  Eigen::MatrixXcd data = f.samples();
  if (direction == Direction::forward) {
    if (f.domain() != Domain::space)
      throw std::invalid_argument("forward transform expects a space-domain field");
    checkerboard(data);
    dft2(data, false);
    checkerboard(data);
    data *= h * h;
    return ScalarField(g, Domain::frequency, std::move(data));
  }
  if (f.domain() != Domain::frequency)
    throw std::invalid_argument("inverse transform expects a frequency-domain field");
  checkerboard(data);
  dft2(data, true);
  checkerboard(data);
  data /= h * h * m * m;
  return ScalarField(g, Domain::space, std::move(data));
}

ScalarField reflect(const ScalarField& f) {
  const int m = f.grid().points();
  Eigen::MatrixXcd s(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) s((m - i) % m, (m - j) % m) = f(i, j);
  return ScalarField(f.grid(), f.domain(), std::move(s));
}

ScalarField convolve(const ScalarField& f, const ScalarField& h) {
  require_space(f, "convolve");
  require_space(h, "convolve");
  if (!(f.grid() == h.grid())) throw std::invalid_argument("convolve: grid mismatch");
  return fourier(fourier(f, Direction::forward) * fourier(h, Direction::forward),
                 Direction::inverse);
}

double heat_kernel(double t, const Vec2& z) {
  return std::exp(-z.squaredNorm() / t) / (t * kPi);
}

double heat_multiplier(double t, const Vec2& xi) {
  return std::exp(-kPi * kPi * t * xi.squaredNorm());
}

ScalarField heat_transform(const ScalarField& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat transform requires t > 0");
  require_space(f, "heat_transform");
  ScalarField spec = fourier(f, Direction::forward);
  const auto a_t = ScalarField::from_function(
      f.grid(), [t](double u, double v) { return cplx(heat_multiplier(t, Vec2(u, v))); },
      Domain::frequency);
  return fourier(spec *= a_t, Direction::inverse);
}

ScalarField spectral_derivative(const ScalarField& f, int a, int b) {
  if (a < 0 || b < 0 || a + b > kMaxDerivativeOrder)
    throw std::invalid_argument("derivative orders must satisfy a, b >= 0 and a + b <= 3");
  require_space(f, "spectral_derivative");
  if (a == 0 && b == 0) return f;
  const Grid& g = f.grid();
  const int m = g.points();
  ScalarField spec = fourier(f, Direction::forward);
  Eigen::MatrixXcd s = spec.samples();
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      // The Nyquist row/column has no consistent sign for odd orders.
      if ((i == 0 && (a & 1)) || (j == 0 && (b & 1))) {
        s(i, j) = 0.0;
        continue;
      }
      const cplx d1 = cplx(0.0, 2.0 * kPi * g.frequency(i));
      const cplx d2 = cplx(0.0, 2.0 * kPi * g.frequency(j));
      s(i, j) *= std::pow(d1, a) * std::pow(d2, b);
    }
  }
  return fourier(ScalarField(g, Domain::frequency, std::move(s)), Direction::inverse);
}

ScalarField translate_modulate(const ScalarField& f, const Vec2& y, const Vec2& x) {
  require_space(f, "translate_modulate");
  const Grid& g = f.grid();
  const int m = g.points();
  const double h = g.spacing();
  const double s1 = y.x() / h, s2 = y.y() / h;
  const long k1 = std::lround(s1), k2 = std::lround(s2);
  if (std::abs(s1 - k1) > 1e-9 || std::abs(s2 - k2) > 1e-9)
    throw std::invalid_argument("translation vector is not on the sample lattice");
  Eigen::MatrixXcd s(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int si = static_cast<int>(((i - k1) % m + m) % m);
      const int sj = static_cast<int>(((j - k2) % m + m) % m);
      const double phase = 2.0 * kPi * (g.coordinate(i) * x.x() + g.coordinate(j) * x.y());
      s(i, j) = f(si, sj) * std::polar(1.0, phase);
    }
  }
  return ScalarField(g, Domain::space, std::move(s));
}

double field_norm(const ScalarField& f, Norm norm) {
  require_space(f, "field_norm");
  if (norm.kind == Norm::Kind::sup) return f.samples().cwiseAbs().maxCoeff();
  if (!(norm.p >= 1.0)) throw std::invalid_argument("L^p norm requires p >= 1");
  const double h = f.grid().spacing();
  const double sum = f.samples().cwiseAbs().array().pow(norm.p).sum();
  return std::pow(h * h * sum, 1.0 / norm.p);
}

double boundary_mass_fraction(const ScalarField& f, double shell) {
  const Grid& g = f.grid();
  const double edge = 0.5 * g.extent() - shell;
  double total = 0.0, outer = 0.0;
  for (int j = 0; j < g.points(); ++j) {
    for (int i = 0; i < g.points(); ++i) {
      const double v = std::abs(f(i, j));
      total += v;
      const Vec2 u = f.node(i, j);
      if (std::max(std::abs(u.x()), std::abs(u.y())) >= edge) outer += v;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

FieldSampler::FieldSampler(const ScalarField& f, double relative_cutoff) : grid_(f.grid()) {
  require_space(f, "FieldSampler");
  const Eigen::MatrixXcd spec = fourier(f, Direction::forward).samples();
  const Eigen::MatrixXd mag = spec.cwiseAbs();
  rows_ = active_indices(mag.rowwise().maxCoeff(), relative_cutoff);
  cols_ = active_indices(mag.colwise().maxCoeff().transpose(), relative_cutoff);
  spectrum_.resize(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(cols_.size()));
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (std::size_t r = 0; r < rows_.size(); ++r) spectrum_(r, c) = spec(rows_[r], cols_[c]);
  spectrum_ /= grid_.extent() * grid_.extent();
}

Eigen::MatrixXcd FieldSampler::on_tensor(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) const {
  Eigen::MatrixXcd ex(xs.size(), static_cast<Eigen::Index>(rows_.size()));
  Eigen::MatrixXcd ey(static_cast<Eigen::Index>(cols_.size()), ys.size());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (Eigen::Index a = 0; a < xs.size(); ++a)
      ex(a, r) = std::polar(1.0, 2.0 * kPi * grid_.frequency(rows_[r]) * xs(a));
  for (Eigen::Index b = 0; b < ys.size(); ++b)
    for (std::size_t c = 0; c < cols_.size(); ++c)
      ey(c, b) = std::polar(1.0, 2.0 * kPi * grid_.frequency(cols_[c]) * ys(b));
  return ex * (spectrum_ * ey);
}

cplx FieldSampler::at(cplx z) const {
  Eigen::VectorXd xs(1), ys(1);
  xs << z.real();
  ys << z.imag();
  return on_tensor(xs, ys)(0, 0);
}

}  // namespace ftz
