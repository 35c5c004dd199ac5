#include "ftz/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ftz/bounds.hpp"

namespace ftz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDecayTolerance = 1e-6;

int inf_norm(const LatticeIndex& x) { return std::max(std::abs(x.x()), std::abs(x.y())); }

long lattice_steps(double v, double step, const char* what) {
  const double s = v / step;
  const long k = std::lround(s);
  if (std::abs(s - k) > 1e-9) throw std::invalid_argument(what);
  return k;
}

}  // namespace

std::vector<LatticeIndex> ordered_indices(int radius) {
  if (radius < 0) throw std::invalid_argument("lattice radius must be nonnegative");
  std::vector<LatticeIndex> xs;
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b) xs.emplace_back(a, b);
  std::stable_sort(xs.begin(), xs.end(), [](const LatticeIndex& p, const LatticeIndex& q) {
    const int np = inf_norm(p), nq = inf_norm(q);
    if (np != nq) return np < nq;
    return p.x() != q.x() ? p.x() < q.x() : p.y() < q.y();
  });
  return xs;
}

DecompositionReport decompose(const SymbolSpec& g, double alpha, int radius, const FockBasis& basis,
                              const Grid& grid) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (radius < 0) throw std::invalid_argument("lattice radius must be nonnegative");
  if (basis.alpha() != alpha) throw std::invalid_argument("basis alpha differs from alpha");
  require_window_fits(LatticeIndex(radius, radius), grid);

  const ScalarField f = sample_symbol(g, grid);
  const OperatorMatrix tg = toeplitz_matrix(f, basis);
  const double numerator = main_bound(f, alpha);

  DecompositionReport rep;
  rep.alpha = alpha;
  rep.dimension = basis.dimension();
  rep.radius = radius;

  ScalarField field_sum = ScalarField::constant(grid, 0.0);
  OperatorMatrix partial = OperatorMatrix::zero(basis);
  int shell = 0;
  auto close_shell = [&] { rep.residuals.push_back(operator_norm(tg - partial)); };
  for (const LatticeIndex& x : ordered_indices(radius)) {
    while (inf_norm(x) > shell) {
      close_shell();
      ++shell;
    }
    ScalarField gx = symbol_piece(f, x, alpha);
    OperatorMatrix tx = toeplitz_matrix(gx, basis);
    PieceRecord r;
    r.index = x;
    r.sup = field_norm(gx, Norm::sup());
    r.norm = operator_norm(tx);
    r.tail_weight = numerator / std::pow(1.0 + std::abs(x.x()) + std::abs(x.y()), 3);
    partial += tx;
    field_sum += gx;
    rep.pieces.push_back(r);
    rep.matrices.push_back(std::move(tx));
    rep.fields.push_back(std::move(gx));
  }
  close_shell();

  rep.field_residual = field_norm(f - field_sum, Norm::sup());
  // once the partial sums converge the residual is round-off and may wobble
  const double floor = 1e-12 * operator_norm(tg);
  for (std::size_t r = 1; r < rep.residuals.size(); ++r)
    if (rep.residuals[r] > rep.residuals[r - 1] + floor) rep.monotone = false;
  return rep;
}

double piece_tail_estimate(const SymbolSpec& g, const LatticeIndex& x, double alpha, const Grid& grid) {
  return main_bound(g, alpha, grid) / std::pow(1.0 + std::abs(x.x()) + std::abs(x.y()), 3);
}

namespace {

// F(psi_x a^{-1}_s)(y) on the space grid
ScalarField representation_kernel(const LatticeIndex& x, double t, double alpha, const Grid& grid) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return reflect(fourier(frequency_multiplier(x, 0.5 / alpha + t, grid), Direction::inverse));
}

double outside_fraction(const ScalarField& k, double radius) {
  double total = 0.0, outer = 0.0;
  const Grid& grid = k.grid();
  for (int j = 0; j < grid.points(); ++j)
    for (int i = 0; i < grid.points(); ++i) {
      const double v = std::abs(k(i, j));
      total += v;
      if (std::max(std::abs(grid.coordinate(i)), std::abs(grid.coordinate(j))) > radius + 1e-12) outer += v;
    }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

double representation_tail_mass(const LatticeIndex& x, double t, double alpha, const Grid& grid, double radius) {
  return outside_fraction(representation_kernel(x, t, alpha, grid), radius);
}

OperatorMatrix integral_representation(const SymbolSpec& g, const LatticeIndex& x, double t, double alpha,
                                       const FockBasis& basis, const Grid& grid, double quad_radius,
                                       double quad_step, const RepresentationOptions& opts) {
  if (!(quad_radius > 0.0) || !(quad_step > 0.0)) throw std::invalid_argument("quadrature box must be positive");
  if (quad_radius >= 0.5 * grid.extent()) throw std::invalid_argument("quadrature box exceeds the grid");
  const int stride = static_cast<int>(lattice_steps(quad_step, grid.spacing(), "quad_step must be a multiple of the grid spacing"));
  const int n = static_cast<int>(std::floor(quad_radius / quad_step + 1e-9));

  const ScalarField kernel = representation_kernel(x, t, alpha, grid);
  const double tail = outside_fraction(kernel, n * quad_step);
  if (tail > kDecayTolerance && !opts.allow_slow_decay)
    throw DecayError("kernel mass outside |y|_inf <= " + std::to_string(n * quad_step) + " is " +
                     std::to_string(tail) + " (limit 1e-6)");

  const ScalarField h = heat_transform(sample_symbol(g, grid), 0.5 / alpha + t);
  const int mid = grid.points() / 2;  // node of y = 0
  std::vector<Vec2> shifts;
  std::vector<cplx> weights;
  for (int b = -n; b <= n; ++b)
    for (int a = -n; a <= n; ++a) {
      double w = quad_step * quad_step;
      if (std::abs(a) == n) w *= 0.5;
      if (std::abs(b) == n) w *= 0.5;
      shifts.emplace_back(a * quad_step, b * quad_step);
      weights.push_back(w * kernel(mid + a * stride, mid + b * stride));
    }
  return translated_toeplitz_sum(h, basis, QuadratureSpec{}, shifts, weights);
}

ScalarField conjugated_symbol(const ScalarField& g, const LatticeIndex& x, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const Grid& grid = g.grid();
  require_window_fits(x, grid);
  const int m = grid.points();
  const double s = 0.5 / alpha;
  const long d1 = lattice_steps(x.x(), grid.frequency_spacing(), "x is not on the frequency lattice");
  const long d2 = lattice_steps(x.y(), grid.frequency_spacing(), "x is not on the frequency lattice");
  const Vec2 xv = x.cast<double>();
  // spectrum of b_x H g times F[a^{-1} psi_0] collapses to S(xi + x) psi_0(xi) e^{-pi^2 s (2 xi.x + |x|^2)}
  const ScalarField spec = reflect(fourier(g, Direction::forward));
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const Vec2 xi(grid.frequency(i), grid.frequency(j));
      const double p = partition_value(LatticeIndex(0, 0), xi);
      if (p == 0.0) continue;
      const long ii = i + d1, jj = j + d2;
      if (ii < 0 || jj < 0 || ii >= m || jj >= m) continue;
      r(i, j) = spec(static_cast<int>(ii), static_cast<int>(jj)) * p *
                std::exp(-kPi * kPi * s * (2.0 * xi.dot(xv) + xv.squaredNorm()));
    }
  return fourier(reflect(ScalarField(grid, Domain::frequency, std::move(r))), Direction::inverse);
}

double weyl_conjugation_residual(const SymbolSpec& g, const LatticeIndex& x, double alpha, const FockBasis& basis,
                                 const Grid& grid) {
  if (basis.alpha() != alpha) throw std::invalid_argument("basis alpha differs from alpha");
  const ScalarField f = sample_symbol(g, grid);
  const OperatorMatrix tx = toeplitz_matrix(symbol_piece(f, x, alpha), basis);
  const cplx u = cplx(0.0, -kPi) * cplx(x.x(), x.y()) / (2.0 * alpha);
  const OperatorMatrix w = displacement_matrix(u, basis);
  const OperatorMatrix lhs = w * tx * w;
  const OperatorMatrix rhs = toeplitz_matrix(conjugated_symbol(f, x, alpha), basis);
  return operator_norm((lhs - rhs).leading_block(std::max(1, basis.dimension() / 2)));
}

double berezin_decomposition_residual(const SymbolSpec& g, double alpha, int radius, const Grid& grid,
                                      const std::vector<cplx>& zs) {
  require_window_fits(LatticeIndex(radius, radius), grid);
  const ScalarField f = sample_symbol(g, grid);
  ScalarField sum = ScalarField::constant(grid, 0.0);
  for (const LatticeIndex& x : ordered_indices(radius)) sum += symbol_piece(f, x, alpha);
  const FieldSampler lhs(heat_transform(f, 1.0 / alpha));
  const FieldSampler rhs(heat_transform(sum, 1.0 / alpha));
  double worst = 0.0;
  for (cplx z : zs) worst = std::max(worst, std::abs(lhs.at(z) - rhs.at(z)));
  return worst;
}

std::vector<cplx> disc_samples(double radius, double step) {
  const int n = static_cast<int>(std::floor(radius / step + 1e-9));
  std::vector<cplx> out;
  for (int b = -n; b <= n; ++b)
    for (int a = -n; a <= n; ++a) {
      const cplx z(a * step, b * step);
      if (std::abs(z) <= radius + 1e-12) out.push_back(z);
    }
  return out;
}

}  // namespace ftz
