#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ftz {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;

/// Uniform periodic grid over the square [-L/2, L/2)^2, identified with C via
/// (Re z, Im z). Node i along an axis sits at -L/2 + i*h, frequency node k at
/// (k - M/2)/L.
class Grid {
 public:
  Grid(double extent, int points);

  double extent() const { return extent_; }
  int points() const { return points_; }
  double spacing() const { return extent_ / points_; }
  double frequency_spacing() const { return 1.0 / extent_; }

  double coordinate(int i) const { return -0.5 * extent_ + i * spacing(); }
  double frequency(int k) const { return (k - points_ / 2) / extent_; }
  /// Largest |xi|_inf representable on the frequency lattice.
  double frequency_extent() const { return 0.5 * points_ / extent_; }

  bool operator==(const Grid& other) const = default;

 private:
  double extent_;
  int points_;
};

Grid make_grid(double extent, int points);

enum class Domain { space, frequency };
enum class Direction { forward, inverse };

/// Complex samples of a function on a Grid. Sample (i, j) lives at
/// (coordinate(i), coordinate(j)) in the space domain and at
/// (frequency(i), frequency(j)) in the frequency domain.
class ScalarField {
 public:
  ScalarField(Grid grid, Domain domain, Eigen::MatrixXcd samples);

  static ScalarField constant(const Grid& grid, cplx value, Domain domain = Domain::space);

  /// Samples fn(u, v) at every node, where (u, v) are the node coordinates in
  /// the requested domain.
  template <class Fn>
  static ScalarField from_function(const Grid& grid, Fn&& fn, Domain domain = Domain::space) {
    const int m = grid.points();
    Eigen::MatrixXcd s(m, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        if (domain == Domain::space)
          s(i, j) = fn(grid.coordinate(i), grid.coordinate(j));
        else
          s(i, j) = fn(grid.frequency(i), grid.frequency(j));
      }
    }
    return ScalarField(grid, domain, std::move(s));
  }

  const Grid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  const Eigen::MatrixXcd& samples() const { return samples_; }
  cplx operator()(int i, int j) const { return samples_(i, j); }
  Vec2 node(int i, int j) const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  /// Pointwise product.
  ScalarField& operator*=(const ScalarField& other);
  ScalarField& operator*=(cplx c);

 private:
  void require_compatible(const ScalarField& other) const;

  Grid grid_;
  Domain domain_;
  Eigen::MatrixXcd samples_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(cplx c, ScalarField a);

/// |f|^p pointwise, as a real-valued field (p = 1 gives |f|).
ScalarField abs_pow(const ScalarField& f, double p = 1.0);

/// Continuum-scaled DFT with the e^{-2 pi i xi.w} convention. Forward maps a
/// space field to its spectrum, inverse maps a spectrum back; each expects the
/// matching input domain.
ScalarField fourier(const ScalarField& f, Direction direction);

/// u -> f(-u) on the periodic lattice (either domain). Combined with fourier
/// this yields the opposite-sign transform: reflect(fourier(f, forward)) is
/// the integral of f(w) e^{+2 pi i xi.w}.
ScalarField reflect(const ScalarField& f);

/// Periodic convolution scaled by spacing^2 so it approximates the integral.
ScalarField convolve(const ScalarField& f, const ScalarField& h);

/// gamma_t(z) = (t pi)^{-1} e^{-|z|^2/t}, the heat kernel on C.
double heat_kernel(double t, const Vec2& z);
/// a_t(xi) = e^{-pi^2 t |xi|^2}, the Fourier transform of gamma_t.
double heat_multiplier(double t, const Vec2& xi);

/// Heat transform H_t f = f * gamma_t, evaluated spectrally.
ScalarField heat_transform(const ScalarField& f, double t);

/// d^a/d(Re z)^a d^b/d(Im z)^b f via spectral multiplication, a + b <= 3.
ScalarField spectral_derivative(const ScalarField& f, int a, int b);
constexpr int kMaxDerivativeOrder = 3;

/// b_x * (tau_y f): translation by a lattice vector y, then modulation by
/// e^{2 pi i w.x}.
ScalarField translate_modulate(const ScalarField& f, const Vec2& y, const Vec2& x);

struct Norm {
  enum class Kind { sup, lp } kind = Kind::sup;
  double p = 1.0;

  static Norm sup() { return {}; }
  static Norm lp(double p) { return {Kind::lp, p}; }
};

double field_norm(const ScalarField& f, Norm norm);

/// Fraction of sum |f| carried by nodes within `shell` of the periodic cell
/// boundary. Used to flag integrands that do not decay inside the grid.
double boundary_mass_fraction(const ScalarField& f, double shell);

/// Evaluates a space field at arbitrary points by its band-limited
/// (trigonometric) interpolant, which reproduces the samples at the nodes.
/// The spectrum is computed once; negligible frequency rows and columns are
/// dropped.
class FieldSampler {
 public:
  explicit FieldSampler(const ScalarField& f, double relative_cutoff = 1e-20);

  /// values(a, b) = f(xs[a], ys[b]).
  Eigen::MatrixXcd on_tensor(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) const;
  cplx at(cplx z) const;

 private:
  Grid grid_;
  std::vector<int> rows_;
  std::vector<int> cols_;
  Eigen::MatrixXcd spectrum_;  // restricted to rows_ x cols_
};

}  // namespace ftz
